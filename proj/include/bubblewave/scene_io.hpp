#ifndef BUBBLEWAVE_SCENE_IO_HPP
#define BUBBLEWAVE_SCENE_IO_HPP

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubblewave/errors.hpp"
#include "bubblewave/pulse.hpp"
#include "bubblewave/scene.hpp"

namespace bubblewave {

/// Fully described input problem: background medium, bubbles and the source.
struct Scene {
  Medium medium;
  std::vector<BubbleSpec> bubbles;
  PointSource source;
};

namespace detail {

using nlohmann::json;

inline std::pair<int, int> byte_to_line_col(const std::string& text,
                                            size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void reject_unknown_keys(const json& obj, const std::string& where,
                                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw SceneParseError("unknown key \"" + it.key() + "\" in " + where);
  }
}

inline const json& require_key(const json& obj, const std::string& where,
                               const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SceneParseError(where + " is missing key \"" + key + "\"");
  return *it;
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number())
    throw SceneParseError(where + " must be a number");
  return v.get<double>();
}

inline int as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer())
    throw SceneParseError(where + " must be an integer");
  return v.get<int>();
}

inline Vec3 as_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3)
    throw SceneParseError(where + " must be an array of 3 numbers");
  Vec3 out;
  for (int k = 0; k < 3; ++k) out[k] = as_number(v[size_t(k)], where);
  return out;
}

inline double optional_number(const json& obj, const std::string& where,
                              const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return as_number(*it, where + "." + key);
}

inline Pulse parse_pulse(const json& v) {
  if (!v.is_object())
    throw SceneParseError("source.pulse must be an object");
  reject_unknown_keys(v, "source.pulse", {"kind", "params"});
  const json& kind_v = require_key(v, "source.pulse", "kind");
  if (!kind_v.is_string())
    throw SceneParseError("source.pulse.kind must be a string");
  const std::string kind = kind_v.get<std::string>();

  json params = json::object();
  if (auto it = v.find("params"); it != v.end()) {
    if (!it->is_object())
      throw SceneParseError("source.pulse.params must be an object");
    params = *it;
  }

  try {
    if (kind == "causal_poly_exp") {
      reject_unknown_keys(params, "source.pulse.params",
                          {"p", "a", "amplitude"});
      const int p = as_integer(require_key(params, "pulse params", "p"),
                               "source.pulse.params.p");
      const double a = as_number(require_key(params, "pulse params", "a"),
                                 "source.pulse.params.a");
      const double amp =
          optional_number(params, "source.pulse.params", "amplitude", 1.0);
      return Pulse::causal_poly_exp(p, a, amp);
    }
    if (kind == "raised_cosine_burst") {
      reject_unknown_keys(params, "source.pulse.params",
                          {"frequency", "n_cycles", "t0", "amplitude"});
      const double f =
          as_number(require_key(params, "pulse params", "frequency"),
                    "source.pulse.params.frequency");
      const double n =
          as_number(require_key(params, "pulse params", "n_cycles"),
                    "source.pulse.params.n_cycles");
      const double t0 =
          optional_number(params, "source.pulse.params", "t0", 0.0);
      const double amp =
          optional_number(params, "source.pulse.params", "amplitude", 1.0);
      return Pulse::raised_cosine_burst(f, n, t0, amp);
    }
    if (kind == "zero") {
      reject_unknown_keys(params, "source.pulse.params", {});
      return Pulse::zero();
    }
  } catch (const InvalidPulse& e) {
    throw SceneParseError(std::string("invalid pulse parameters: ") +
                          e.what());
  }
  throw SceneParseError("unknown pulse kind \"" + kind + "\"");
}

inline BubbleSpec parse_bubble(const json& v, size_t index) {
  const std::string where = "bubbles[" + std::to_string(index) + "]";
  if (!v.is_object()) throw SceneParseError(where + " must be an object");
  reject_unknown_keys(v, where,
                      {"center", "delta", "radius_ref", "rho_c_bar",
                       "k_c_bar"});
  BubbleSpec b;
  b.center = as_vec3(require_key(v, where, "center"), where + ".center");
  b.delta = as_number(require_key(v, where, "delta"), where + ".delta");
  b.radius_ref =
      as_number(require_key(v, where, "radius_ref"), where + ".radius_ref");
  b.rho_c_bar =
      as_number(require_key(v, where, "rho_c_bar"), where + ".rho_c_bar");
  b.k_c_bar = as_number(require_key(v, where, "k_c_bar"), where + ".k_c_bar");
  return b;
}

} // namespace detail

/// Parse a scene document.  Unknown keys are rejected at every level so that
/// typos fail loudly instead of silently using defaults.
inline Scene parse_scene(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    const auto [line, col] = detail::byte_to_line_col(text, e.byte);
    throw SceneParseError("line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object())
    throw SceneParseError("scene document must be a JSON object");
  detail::reject_unknown_keys(doc, "scene", {"medium", "bubbles", "source"});

  Scene scene;
  const auto& medium = detail::require_key(doc, "scene", "medium");
  if (!medium.is_object())
    throw SceneParseError("medium must be an object");
  detail::reject_unknown_keys(medium, "medium", {"rho_m", "k_m"});
  scene.medium.rho_m = detail::as_number(
      detail::require_key(medium, "medium", "rho_m"), "medium.rho_m");
  scene.medium.k_m = detail::as_number(
      detail::require_key(medium, "medium", "k_m"), "medium.k_m");

  const auto& bubbles = detail::require_key(doc, "scene", "bubbles");
  if (!bubbles.is_array() || bubbles.empty())
    throw SceneParseError("bubbles must be a non-empty array");
  for (size_t i = 0; i < bubbles.size(); ++i)
    scene.bubbles.push_back(detail::parse_bubble(bubbles[i], i));

  const auto& source = detail::require_key(doc, "scene", "source");
  if (!source.is_object())
    throw SceneParseError("source must be an object");
  detail::reject_unknown_keys(source, "source", {"position", "pulse"});
  scene.source.position = detail::as_vec3(
      detail::require_key(source, "source", "position"), "source.position");
  scene.source.pulse =
      detail::parse_pulse(detail::require_key(source, "source", "pulse"));
  return scene;
}

inline Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneParseError("cannot open scene file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

} // namespace bubblewave

#endif // BUBBLEWAVE_SCENE_IO_HPP
