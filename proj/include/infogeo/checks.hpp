#pragma once

// Named invariant suites with a fixed seed, used by `infogeo check`.
// Every check records the largest observed error over its random instances
// and compares it with a fixed tolerance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "infogeo/atlas.hpp"
#include "infogeo/deformed.hpp"
#include "infogeo/flows.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/parametric.hpp"
#include "infogeo/random.hpp"
#include "infogeo/second_order.hpp"
#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"

namespace infogeo::checks {

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = kDefaultSeed;
  std::vector<CheckResult> checks;
  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult &c) { return c.passed; });
  }
};

struct CheckOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Negative control: the transports suite uses an m-transport scaled by
  /// (1 + 1e-6), which must be detected.
  bool inject_fault = false;
};

inline constexpr std::string_view kSuites[] = {
    "transports", "flows", "second-order", "parametric", "deformed"};

namespace detail {

class Recorder {
public:
  Recorder(std::string name, double tol) : r_{std::move(name), 0, 0.0, tol, true} {}
  void observe(double err) {
    ++r_.instances;
    if (!std::isfinite(err))
      err = std::numeric_limits<double>::infinity();
    r_.max_error = std::max(r_.max_error, err);
  }
  CheckResult finish() {
    r_.passed = r_.max_error <= r_.tolerance;
    return r_;
  }

private:
  CheckResult r_;
};

inline double diff(const FiberVector &a, const FiberVector &b) {
  return calculus::max_abs_diff(a.values(), b.values());
}

inline std::size_t random_size(Rng &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace detail

inline SuiteReport transports_suite(const CheckOptions &opt) {
  Rng rng(opt.seed);
  constexpr std::size_t count = 1000;
  constexpr double tol = 1e-12;
  auto mt = [&](const FiberVector &u, const ProbabilityVector &q) {
    FiberVector v = m_transport(u, q);
    return opt.inject_fault ? (1.0 + 1e-6) * v : v;
  };
  detail::Recorder e_semi("e_semigroup", tol), m_semi("m_semigroup", tol),
      dual("duality", tol), cons("conservation", tol), h_inv("h_inverse", tol),
      h_iso("h_isometry", tol), h_lin("h_linearity", tol);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = detail::random_size(rng, 2, 8);
    const ProbabilityVector p = random_probability(rng, n);
    const ProbabilityVector q = random_probability(rng, n);
    const ProbabilityVector r = random_probability(rng, n);
    const FiberVector u = random_fiber(rng, p);
    const FiberVector w = random_fiber(rng, p);
    const FiberVector v = random_fiber(rng, q);
    e_semi.observe(detail::diff(e_transport(e_transport(u, q), r), e_transport(u, r)));
    m_semi.observe(detail::diff(mt(mt(u, q), r), mt(u, r)));
    dual.observe(std::abs(inner_product(e_transport(u, q), v) -
                          inner_product(u, mt(v, p))));
    cons.observe(std::abs(inner_product(e_transport(u, q), mt(w, q)) -
                          inner_product(u, w)));
    h_inv.observe(detail::diff(h_transport(h_transport(u, q), p), u));
    h_iso.observe(std::abs(inner_product(h_transport(u, q), h_transport(w, q)) -
                           inner_product(u, w)));
    const double a = uniform(rng, -2.0, 2.0);
    h_lin.observe(detail::diff(h_transport(u + a * w, q),
                               h_transport(u, q) + a * h_transport(w, q)));
  }
  return {"transports", opt.seed,
          {e_semi.finish(), m_semi.finish(), dual.finish(), cons.finish(),
           h_inv.finish(), h_iso.finish(), h_lin.finish()}};
}

inline SuiteReport flows_suite(const CheckOptions &opt) {
  Rng rng(opt.seed);
  constexpr double t_end = 5.0;
  constexpr double dt = 1e-3;
  detail::Recorder exp_o("oracle_exp_family", 1e-6), ent_o("oracle_entropy", 1e-6),
      kl_o("oracle_kl_mixture", 1e-6), mix_o("oracle_mixture", 1e-6),
      h_o("oracle_h_flow", 1e-6), centered("score_centered", 1e-8),
      convex("cumulant_convexity", 0.0), mean_rate("mean_derivative", 1e-6);
  for (std::size_t n : {2u, 3u, 5u}) {
    const ProbabilityVector p0 = random_probability(rng, n);
    const RandomVariable f = random_variable(rng, n);
    auto compare = [&](detail::Recorder &rec, const Trajectory &tr,
                       const std::function<ProbabilityVector(double)> &oracle) {
      double err = 0.0;
      for (std::size_t k = 0; k < tr.size(); ++k) {
        err = std::max(err, distance(tr.point(k), oracle(tr.time(k))));
        centered.observe(std::abs(expectation(tr.point(k), tr.score(k).values())));
      }
      rec.observe(err);
    };
    compare(exp_o, integrate_flow(expected_value_section(f), p0, t_end, dt),
            [&](double t) { return exp_family_curve(f, p0, t).point; });
    compare(ent_o, integrate_flow(entropy_section(), p0, t_end, dt),
            [&](double t) { return entropy_flow_curve(p0, t); });
    const ProbabilityVector target = random_probability(rng, n);
    compare(kl_o,
            integrate_flow(kl_second_section(target), p0, t_end, dt, Sign::minus),
            [&](double t) { return kl_mixture_flow_curve(p0, target, t); });
    FiberVector u = random_fiber(rng, p0);
    const double mn = *std::min_element(u.values().begin(), u.values().end());
    u = (-0.15 / mn) * u; // keeps [0, 5] inside the admissible interval
    compare(mix_o,
            integrate_flow(transport_section(u, Transport::mixture), p0, t_end, dt),
            [&](double t) { return mixture_flow_curve(u, t); });
    const FiberVector hu = random_unit_fiber(rng, p0);
    const double h_end = std::min(t_end, 0.9 * h_flow_interval(hu).hi);
    compare(h_o,
            integrate_flow(transport_section(hu, Transport::hilbert), p0, h_end, dt),
            [&](double t) { return h_flow_curve(hu, t); });

    for (int k = 0; k < 20; ++k) {
      const double t1 = uniform(rng, -3.0, 3.0);
      const double t2 = uniform(rng, -3.0, 3.0);
      const CumulantRecord c1 = exp_family_curve(f, p0, t1).cumulant;
      const CumulantRecord c2 = exp_family_curve(f, p0, t2).cumulant;
      convex.observe(std::max({0.0, -c1.psi_ddot,
                               -(c2.psi_dot - c1.psi_dot) * (t2 - t1)}));
      // d/dt E_{p(t)}[g] = <g - E g, Sp> along the exponential family
      const RandomVariable g = random_variable(rng, n);
      auto curve = [&](double t) { return exp_family_curve(f, p0, t).point; };
      const ProbabilityVector pt = curve(t1);
      const double fd = calculus::central_first(
          [&](double t) { return expectation(curve(t), g); }, t1, 1e-4);
      mean_rate.observe(std::abs(
          fd - inner_product(center(g, pt), score_of_curve(curve, t1))));
    }
  }
  return {"flows", opt.seed,
          {exp_o.finish(), ent_o.finish(), kl_o.finish(), mix_o.finish(),
           h_o.finish(), centered.finish(), convex.finish(), mean_rate.finish()}};
}

inline SuiteReport second_order_suite(const CheckOptions &opt) {
  Rng rng(opt.seed);
  detail::Recorder e_null("null_e_acceleration", 1e-6),
      m_null("null_m_acceleration", 1e-6), e_round("e_chart_round_trip", 1e-12),
      m_round("m_chart_round_trip", 1e-12), e_aff("e_transition_affine", 1e-12),
      m_aff("m_transition_affine", 1e-12), e_vel("e_chart_velocity", 1e-6),
      m_vel("m_chart_velocity", 1e-6);
  for (std::size_t k = 0; k < 100; ++k) {
    const std::size_t n = detail::random_size(rng, 2, 6);
    const ProbabilityVector p = random_probability(rng, n);
    const FiberVector u = random_fiber(rng, p);
    const double t = uniform(rng, -1.0, 1.0);
    e_null.observe(calculus::max_abs(
        e_acceleration([&](double s) { return exp_family_curve(u, s); }, t).values()));
    const double mn = *std::min_element(u.values().begin(), u.values().end());
    const double mx = *std::max_element(u.values().begin(), u.values().end());
    const FiberVector um = (0.5 / std::max(-mn, mx)) * u;
    m_null.observe(calculus::max_abs(
        m_acceleration([&](double s) { return mixture_flow_curve(um, s); }, t).values()));

    const ProbabilityVector q = random_probability(rng, n);
    const FiberVector w = random_fiber(rng, q);
    const ChartImage ec = e_chart(p, q, w);
    const BundlePoint eb = e_patch(ec.point_coord, ec.vector_coord);
    e_round.observe(std::max(distance(eb.point, q), detail::diff(eb.vector, w)));
    const ChartImage mc = m_chart(p, q, w);
    const BundlePoint mb = m_patch(mc.point_coord, mc.vector_coord);
    m_round.observe(std::max(distance(mb.point, q), detail::diff(mb.vector, w)));

    const ProbabilityVector p1 = random_probability(rng, n);
    const FiberVector u1 = random_fiber(rng, p, 0.3);
    const FiberVector u2 = random_fiber(rng, p, 0.3);
    const double a = uniform(rng, 0.0, 1.0);
    e_aff.observe(detail::diff(e_transition(p1, a * u1 + (1.0 - a) * u2),
                               a * e_transition(p1, u1) +
                                   (1.0 - a) * e_transition(p1, u2)));
    m_aff.observe(detail::diff(m_transition(p1, a * u1 + (1.0 - a) * u2),
                               a * m_transition(p1, u1) +
                                   (1.0 - a) * m_transition(p1, u2)));

    // chart velocity at the center along a curve through p equals Sp(0)
    auto curve = [&](double s) { return exp_family_curve(um, s); };
    const FiberVector score = score_of_curve(curve, 0.0);
    auto e_coord = [&](double s) {
      const FiberVector c = e_chart(p, curve(s), FiberVector::zero(curve(s))).point_coord;
      return std::vector<double>(c.values().begin(), c.values().end());
    };
    auto m_coord = [&](double s) {
      const FiberVector c = m_chart(p, curve(s), FiberVector::zero(curve(s))).point_coord;
      return std::vector<double>(c.values().begin(), c.values().end());
    };
    e_vel.observe(calculus::max_abs_diff(calculus::central_first_vec(e_coord, 0.0, 1e-4),
                                         score.values()));
    m_vel.observe(calculus::max_abs_diff(calculus::central_first_vec(m_coord, 0.0, 1e-4),
                                         score.values()));
  }
  return {"second-order", opt.seed,
          {e_null.finish(), m_null.finish(), e_round.finish(), m_round.finish(),
           e_aff.finish(), m_aff.finish(), e_vel.finish(), m_vel.finish()}};
}

inline SuiteReport parametric_suite(const CheckOptions &opt) {
  Rng rng(opt.seed);
  detail::Recorder inv("inverse_vs_lu", 1e-10), det("determinant_vs_lu", 1e-10),
      defn("fisher_vs_definition", 1e-10), ident("fisher_times_inverse", 1e-10),
      fr("fisher_rao_vs_inner_product", 1e-12), sphere("sphere_pullback", 1e-12);
  for (std::size_t k = 0; k < 500; ++k) {
    const std::size_t n = detail::random_size(rng, 1, 8);
    const ProbabilityVector p = random_probability(rng, n + 1);
    const SolidCoordinates eta = simplex_to_solid(p);
    const FisherMatrix fm = fisher_matrix(eta);
    const FisherMatrix fi = fisher_inverse(eta);
    const linalg::LU lu(fm.matrix());
    inv.observe(linalg::max_abs_diff(lu.inverse(), fi.matrix()));
    const double d = fisher_inverse_determinant(eta);
    det.observe(std::abs(1.0 / lu.determinant() - d) / d);
    // sum_x d_i pi(x) d_j pi(x) / pi(x) with d_j pi = e_j - e_0
    linalg::Matrix def(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        def(i, j) = 1.0 / p[0] + (i == j ? 1.0 / p[i + 1] : 0.0);
    defn.observe(linalg::max_abs_diff(def, fm.matrix()));
    ident.observe(linalg::max_abs_diff(fm.matrix() * fi.matrix(),
                                       linalg::Matrix::identity(n)));
  }
  for (std::size_t k = 0; k < 200; ++k) {
    const std::size_t n = detail::random_size(rng, 2, 8);
    const ProbabilityVector p = random_probability(rng, n);
    const FiberVector u = random_fiber(rng, p);
    const FiberVector v = random_fiber(rng, p);
    std::vector<double> up(n), vp(n);
    for (std::size_t i = 0; i < n; ++i) {
      up[i] = u[i] * p[i];
      vp[i] = v[i] * p[i];
    }
    fr.observe(std::abs(fisher_rao_metric(p, up, vp) - inner_product(u, v)));
    const std::vector<double> a = sphere_embedding(p);
    auto tangent = [&] {
      std::vector<double> w = random_values(rng, n);
      double aw = 0.0, aa = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        aw += a[i] * w[i];
        aa += a[i] * a[i];
      }
      for (std::size_t i = 0; i < n; ++i)
        w[i] -= aw / aa * a[i];
      return w;
    };
    const std::vector<double> w1 = tangent();
    const std::vector<double> w2 = tangent();
    double euclid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      euclid += w1[i] * w2[i];
    sphere.observe(std::abs(fisher_rao_metric(p, sphere_differential(a, w1),
                                              sphere_differential(a, w2)) -
                            euclid));
  }
  return {"parametric", opt.seed,
          {inv.finish(), det.finish(), defn.finish(), ident.finish(), fr.finish(),
           sphere.finish()}};
}

inline SuiteReport deformed_suite(const CheckOptions &opt) {
  Rng rng(opt.seed);
  detail::Recorder round("exp_log_identity", 1e-12), limit("tsallis_q_to_1", 1e-5),
      ortho("q_score_orthogonality", 1e-8), mono("log_increasing", 0.0),
      deriv("exp_derivative_is_A", 1e-6);
  const DeformedLog logs[] = {DeformedLog::power(0.0), DeformedLog::power(0.5),
                              DeformedLog::power(2.0), DeformedLog::power(3.0),
                              DeformedLog::kaniadakis(), DeformedLog::newton()};
  for (const DeformedLog &dl : logs)
    for (int k = 0; k < 200; ++k) {
      const double x = std::exp(uniform(rng, -2.0, 2.0));
      round.observe(std::abs(dl.exp(dl.log(x)) - x) / std::max(1.0, x));
      const double x2 = std::exp(uniform(rng, -2.0, 2.0));
      mono.observe((x2 - x) * (dl.log(x2) - dl.log(x)) < 0.0 ? 1.0 : 0.0);
      const double y = dl.log(x);
      const double fd = calculus::richardson_first(
          [&](double s) { return dl.exp(s); }, y, 1e-4);
      deriv.observe(std::abs(fd - dl.a(dl.exp(y))) / std::max(1.0, dl.a(x)));
    }
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = detail::random_size(rng, 2, 8);
    const ProbabilityVector p = random_probability(rng, n);
    const double h = entropy(p);
    limit.observe(std::max(std::abs(tsallis_entropy(p, 1.0 + 1e-6) - h),
                           std::abs(tsallis_entropy(p, 1.0 - 1e-6) - h)));
    const FiberVector u = random_fiber(rng, p);
    const double q = uniform(rng, 0.0, 3.0);
    const QFiberVector s =
        q_score([&](double t) { return exp_family_curve(u, t); },
                uniform(rng, -1.0, 1.0), q);
    ortho.observe(std::abs(s.escort_sum()));
  }
  return {"deformed", opt.seed,
          {round.finish(), limit.finish(), ortho.finish(), mono.finish(),
           deriv.finish()}};
}

/// Runs one suite by name; throws DomainError for an unknown name.
inline SuiteReport run_suite(std::string_view name, const CheckOptions &opt) {
  if (name == "transports")
    return transports_suite(opt);
  if (name == "flows")
    return flows_suite(opt);
  if (name == "second-order")
    return second_order_suite(opt);
  if (name == "parametric")
    return parametric_suite(opt);
  if (name == "deformed")
    return deformed_suite(opt);
  throw DomainError("unknown suite \"" + std::string(name) + "\"");
}

inline bool is_suite(std::string_view name) {
  return name == "all" ||
         std::find(std::begin(kSuites), std::end(kSuites), name) != std::end(kSuites);
}

inline nlohmann::json to_json(const SuiteReport &r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult &c : r.checks)
    checks.push_back({{"name", c.name},
                      {"instances", c.instances},
                      {"max_error", c.max_error},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  return {{"suite", r.suite},
          {"seed", r.seed},
          {"passed", r.passed()},
          {"checks", std::move(checks)}};
}

} // namespace infogeo::checks
