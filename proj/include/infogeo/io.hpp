#pragma once

// Serialization: probability vectors as JSON, trajectories as CSV, and the
// flow configuration file.
//
//   ProbabilityVector  {"labels": [...], "weights": [...]}
//   Trajectory CSV     t,p_0,...,p_{N-1},s_0,...,s_{N-1}
//   Flow config        {"flow": "entropy"|"expected"|"kl_m"|"custom",
//                       "p0": [...], "f": [...], "dt": ..., "t_end": ...,
//                       "sign": -1|1, "target": [...],
//                       "transport": "e"|"m"|"h", "u": [...]}
//
// Numbers are written with 17 significant digits through std::to_chars,
// which does not depend on the locale.

#include <array>
#include <charconv>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "infogeo/flows.hpp"
#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"

namespace infogeo::io {

inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  if (res.ec != std::errc())
    throw Error("format_double: conversion failed");
  return std::string(buf.data(), res.ptr);
}

inline void write_trajectory_csv(std::ostream &os, const Trajectory &traj) {
  if (traj.empty())
    return;
  const std::size_t n = traj.point(0).size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i)
    os << ",p_" << i;
  for (std::size_t i = 0; i < n; ++i)
    os << ",s_" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_double(traj.time(k));
    for (double w : traj.point(k).weights())
      os << ',' << format_double(w);
    for (double s : traj.score(k).values())
      os << ',' << format_double(s);
    os << '\n';
  }
}

inline nlohmann::json to_json(const ProbabilityVector &p) {
  nlohmann::json labels = nlohmann::json::array();
  for (const std::string &l : p.space().labels())
    labels.push_back(l);
  nlohmann::json weights = nlohmann::json::array();
  for (double w : p.weights())
    weights.push_back(w);
  return {{"labels", std::move(labels)}, {"weights", std::move(weights)}};
}

/// 17-significant-digit rendering of a probability vector.
inline std::string dump_probability(const ProbabilityVector &p) {
  std::string s = "{\"labels\": [";
  const auto labels = p.space().labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    s += (i ? ", " : "") + nlohmann::json(labels[i]).dump();
  s += "], \"weights\": [";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? ", " : "") + format_double(p[i]);
  s += "]}";
  return s;
}

inline ProbabilityVector probability_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("weights"))
    throw DomainError("probability JSON: expected an object with \"weights\"");
  auto weights = j.at("weights").get<std::vector<double>>();
  std::vector<std::string> labels;
  if (j.contains("labels"))
    labels = j.at("labels").get<std::vector<std::string>>();
  if (labels.empty())
    return ProbabilityVector(std::move(weights));
  if (labels.size() != weights.size())
    throw SpaceMismatch("probability JSON: labels and weights differ in size");
  return ProbabilityVector(SampleSpace(std::move(labels)), std::move(weights));
}

enum class FlowKind { entropy, expected, kl_m, custom };

struct FlowConfig {
  FlowKind flow = FlowKind::entropy;
  std::vector<double> p0;
  std::vector<double> f;      // expected
  std::vector<double> target; // kl_m, defaults to uniform
  Transport transport = Transport::exponential; // custom
  std::vector<double> u;                        // custom, centered at p0
  double dt = kDefaultStep;
  double t_end = kDefaultHorizon;
  Sign sign = Sign::minus;
};

inline FlowConfig parse_flow_config(const nlohmann::json &j) {
  if (!j.is_object())
    throw DomainError("flow config: expected a JSON object");
  FlowConfig c;
  const std::string flow = j.at("flow").get<std::string>();
  if (flow == "entropy")
    c.flow = FlowKind::entropy;
  else if (flow == "expected")
    c.flow = FlowKind::expected;
  else if (flow == "kl_m")
    c.flow = FlowKind::kl_m;
  else if (flow == "custom")
    c.flow = FlowKind::custom;
  else
    throw DomainError("flow config: unknown flow \"" + flow + "\"");
  c.p0 = j.at("p0").get<std::vector<double>>();
  if (j.contains("f"))
    c.f = j.at("f").get<std::vector<double>>();
  if (j.contains("target"))
    c.target = j.at("target").get<std::vector<double>>();
  if (j.contains("u"))
    c.u = j.at("u").get<std::vector<double>>();
  if (j.contains("transport")) {
    const std::string t = j.at("transport").get<std::string>();
    if (t == "e")
      c.transport = Transport::exponential;
    else if (t == "m")
      c.transport = Transport::mixture;
    else if (t == "h")
      c.transport = Transport::hilbert;
    else
      throw DomainError("flow config: transport must be e, m or h");
  }
  if (c.flow == FlowKind::custom)
    c.sign = Sign::plus;
  if (j.contains("dt"))
    c.dt = j.at("dt").get<double>();
  if (j.contains("t_end"))
    c.t_end = j.at("t_end").get<double>();
  if (j.contains("sign")) {
    const int s = j.at("sign").get<int>();
    if (s != 1 && s != -1)
      throw DomainError("flow config: sign must be 1 or -1");
    c.sign = s == 1 ? Sign::plus : Sign::minus;
  }
  if (!(c.dt > 0.0) || !(c.t_end > 0.0))
    throw DomainError("flow config: dt and t_end must be positive");
  if (c.flow == FlowKind::expected && c.f.size() != c.p0.size())
    throw DomainError("flow config: \"f\" must have one value per point");
  if (c.flow == FlowKind::custom && c.u.size() != c.p0.size())
    throw DomainError("flow config: \"u\" must have one value per point");
  if (!c.target.empty() && c.target.size() != c.p0.size())
    throw DomainError("flow config: \"target\" has the wrong size");
  return c;
}

/// A flow ready to integrate: the section F, Sp = sign F, and the loss
/// whose gradient F is (absent for transport flows).
struct FlowProblem {
  ProbabilityVector p0;
  Section section;
  std::optional<std::function<double(const ProbabilityVector &)>> loss;
};

/// entropy: loss -H; expected: loss -E_p[f]; kl_m: loss KL(target || p);
/// with sign -1 each flow is the natural gradient descent of its loss.
inline FlowProblem make_flow_problem(const FlowConfig &c) {
  ProbabilityVector p0(c.p0);
  switch (c.flow) {
  case FlowKind::entropy:
    return {p0,
            [](const ProbabilityVector &p) { return -grad_entropy(p); },
            [](const ProbabilityVector &p) { return -entropy(p); }};
  case FlowKind::expected: {
    RandomVariable f(c.f);
    return {p0,
            [f](const ProbabilityVector &p) { return -grad_expected_value(f, p); },
            [f](const ProbabilityVector &p) { return -expectation(p, f); }};
  }
  case FlowKind::kl_m: {
    ProbabilityVector target =
        c.target.empty() ? ProbabilityVector::uniform(p0.size())
                         : ProbabilityVector(c.target);
    return {p0, kl_second_section(target),
            [target](const ProbabilityVector &p) { return kl(target, p); }};
  }
  case FlowKind::custom: {
    FiberVector u = center(c.u, p0);
    return {p0, transport_section(std::move(u), c.transport), std::nullopt};
  }
  }
  throw DomainError("flow config: unknown flow");
}

} // namespace infogeo::io
