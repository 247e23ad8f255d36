#ifndef BUBBLEWAVE_BUBBLEWAVE_HPP
#define BUBBLEWAVE_BUBBLEWAVE_HPP

#include "bubblewave/dynamics.hpp"
#include "bubblewave/effective.hpp"
#include "bubblewave/errors.hpp"
#include "bubblewave/field.hpp"
#include "bubblewave/geometry.hpp"
#include "bubblewave/grid_io.hpp"
#include "bubblewave/incident.hpp"
#include "bubblewave/pulse.hpp"
#include "bubblewave/scene.hpp"
#include "bubblewave/scene_io.hpp"
#include "bubblewave/time_quadrature.hpp"

#endif // BUBBLEWAVE_BUBBLEWAVE_HPP
