#pragma once

#include <stdexcept>
#include <string>

namespace screwgrasp {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  numerical_breakdown,
  identity_displacement,
  parse_error,
  empty_cloud,
  degenerate_geometry,
  degenerate_neighborhood,
  model_unbounded,
  axis_not_on_body,
  bad_edge_selector,
  zero_magnitude,
  empty_input,
  too_many_segments,
  no_feasible_pair,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::numerical_breakdown: return "numerical breakdown";
    case Errc::identity_displacement: return "identity displacement";
    case Errc::parse_error: return "parse error";
    case Errc::empty_cloud: return "empty cloud";
    case Errc::degenerate_geometry: return "degenerate geometry";
    case Errc::degenerate_neighborhood: return "degenerate neighborhood";
    case Errc::model_unbounded: return "model unbounded";
    case Errc::axis_not_on_body: return "axis not on body";
    case Errc::bad_edge_selector: return "bad edge selector";
    case Errc::zero_magnitude: return "zero magnitude";
    case Errc::empty_input: return "empty input";
    case Errc::too_many_segments: return "too many segments";
    case Errc::no_feasible_pair: return "no feasible pair";
  }
  return "unknown error";
}

// All library failures are reported through this type so callers (and the
// CLI's exit-code mapping) can switch on a stable code instead of parsing
// message strings.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace screwgrasp
