#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "infogeo/flows.hpp"
#include "infogeo/random.hpp"
#include "oracles.hpp"

using namespace infogeo;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

const ProbabilityVector kHalf({0.5, 0.5});
const ProbabilityVector kQuarter({0.25, 0.75});

} // namespace

TEST(NaturalGradient, SpecExamples) {
  const RandomVariable f({0.0, 1.0});
  const FiberVector g = natural_gradient([&](const ProbabilityVector &) { return f; }, kHalf);
  EXPECT_DOUBLE_EQ(g[0], -0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  EXPECT_LT(calculus::max_abs(grad_entropy(ProbabilityVector::uniform(5)).values()), 1e-15);
  Rng rng(1);
  const ProbabilityVector p = random_probability(rng, 4);
  EXPECT_LT(calculus::max_abs(grad_kl_first(p, p).values()), 1e-15);
  EXPECT_LT(calculus::max_abs(grad_kl_second(p, p).values()), 1e-15);
}

TEST(GradEntropy, SpecValues) {
  const FiberVector g = grad_entropy(kQuarter);
  EXPECT_NEAR(g[0], 0.8239592165010822, 1e-12);
  EXPECT_NEAR(g[1], -0.2746530721670274, 1e-12);
}

TEST(GradKL, SecondFormSpecValue) {
  const FiberVector g = grad_kl_second(kHalf, kQuarter);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], -0.5);
  EXPECT_THROW(grad_kl_first(kHalf, ProbabilityVector::uniform(3)), SpaceMismatch);
}

TEST(Gradients, AreCentered) {
  Rng rng(2);
  for (int k = 0; k < 200; ++k) {
    const ProbabilityVector p = random_probability(rng, 2 + k % 6);
    const ProbabilityVector p0 = random_probability(rng, p.size());
    const auto w = vec(p.weights());
    EXPECT_NEAR(oracle::mean(w, vec(grad_entropy(p).values())), 0.0, 1e-14);
    EXPECT_NEAR(oracle::mean(w, vec(grad_kl_first(p, p0).values())), 0.0, 1e-14);
    EXPECT_NEAR(oracle::mean(w, vec(grad_kl_second(p, p0).values())), 0.0, 1e-14);
  }
}

TEST(IntegrateFlow, ExpectedValueFlowReachesQuarterAtLog3) {
  const Trajectory tr = integrate_flow(expected_value_section(RandomVariable({0.0, 1.0})), kHalf, std::log(3.0));
  EXPECT_LT(distance(tr.points().back(), kQuarter), 1e-6);
  EXPECT_DOUBLE_EQ(tr.times().back(), std::log(3.0));
}

TEST(IntegrateFlow, ZeroSectionIsConstant) {
  const Trajectory tr = integrate_flow([](const ProbabilityVector &p) { return FiberVector::zero(p); }, kQuarter, 1.0);
  for (const ProbabilityVector &p : tr.points())
    EXPECT_LT(distance(p, kQuarter), 1e-15);
}

TEST(IntegrateFlow, KLDescentMatchesMixtureDecay) {
  const Trajectory tr = integrate_flow(kl_second_section(kHalf), kQuarter, std::log(2.0), kDefaultStep, Sign::minus);
  EXPECT_LT(distance(tr.points().back(), ProbabilityVector({0.375, 0.625})), 1e-6);
}

TEST(IntegrateFlow, StepDividesTheHorizon) {
  const Trajectory tr = integrate_flow(entropy_section(), kQuarter, 1.0, 0.3);
  ASSERT_EQ(tr.size(), 5u);
  EXPECT_DOUBLE_EQ(tr.time(1), 0.25);
  EXPECT_EQ(tr.time(4), 1.0);
}

TEST(IntegrateFlow, RejectsBadArguments) {
  EXPECT_THROW(integrate_flow(entropy_section(), kHalf, 1.0, 0.0), DomainError);
  EXPECT_THROW(integrate_flow(entropy_section(), kHalf, -1.0, 0.1), DomainError);
}

TEST(IntegrateFlow, SectionBasedElsewhereIsBaseMismatch) {
  auto bad = [](const ProbabilityVector &) { return FiberVector::zero(kHalf); };
  EXPECT_THROW(integrate_flow(bad, kQuarter, 1.0), BaseMismatch);
}

TEST(IntegrateFlow, UnderflowIsDomainEscape) {
  const auto steep = [](const ProbabilityVector &p) {
    return center(std::vector<double>{1e6, -1e6}, p);
  };
  try {
    integrate_flow(steep, kHalf, 10.0, 1.0);
    FAIL() << "expected DomainEscape";
  } catch (const DomainEscape &e) {
    EXPECT_GE(e.t(), 0.0);
    EXPECT_LE(e.t(), 10.0);
  }
}

TEST(IntegrateFlow, OverflowIsNumericalBlowup) {
  const auto huge = [](const ProbabilityVector &p) {
    return FiberVector(p, std::vector<double>{1e300, -1e300});
  };
  // h * F overflows the log weights on the first stage.
  EXPECT_THROW(integrate_flow(huge, kHalf, 1e10, 1e10), NumericalBlowup);
}

TEST(Trajectory, EnforcesInvariants) {
  Trajectory tr;
  tr.push_back(0.0, kHalf, FiberVector::zero(kHalf));
  EXPECT_THROW(tr.push_back(0.0, kHalf, FiberVector::zero(kHalf)), DomainError);
  EXPECT_THROW(tr.push_back(1.0, kQuarter, FiberVector::zero(kHalf)), BaseMismatch);
}

TEST(ExpFamilyCurve, SpecValues) {
  const RandomVariable f({0.0, 1.0});
  const ExpFamilyPoint a = exp_family_curve(f, kHalf, 0.0);
  EXPECT_LT(distance(a.point, kHalf), 1e-15);
  EXPECT_NEAR(a.cumulant.psi, 0.0, 1e-15);
  const ExpFamilyPoint b = exp_family_curve(f, kHalf, std::log(3.0));
  EXPECT_LT(distance(b.point, kQuarter), 1e-15);
  EXPECT_NEAR(b.cumulant.psi, std::log(2.0), 1e-15);
  EXPECT_NEAR(b.cumulant.psi_dot, 0.75, 1e-15);
  EXPECT_NEAR(b.cumulant.psi_ddot, 0.1875, 1e-15);
}

TEST(ExpFamilyCurve, NoOverflowForLargeT) {
  // e^{1300} overflows, yet psi and the point (whose small weight e^{-650}
  // is above the positivity floor) stay representable.
  const ExpFamilyPoint a = exp_family_curve(RandomVariable({1.0, 2.0}), kHalf, 650.0);
  EXPECT_NEAR(a.cumulant.psi, 1300.0 - std::log(2.0), 1e-12);
  EXPECT_NEAR(a.point[0] / std::exp(-650.0), 1.0, 1e-12);
}

TEST(ExpFamilyCurve, CumulantIsConvex) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + k % 5;
    const ProbabilityVector p0 = random_probability(rng, n);
    const RandomVariable f = random_variable(rng, n, 3.0);
    const double t1 = uniform(rng, -4.0, 4.0), t2 = uniform(rng, -4.0, 4.0);
    const CumulantRecord c1 = exp_family_curve(f, p0, t1).cumulant;
    const CumulantRecord c2 = exp_family_curve(f, p0, t2).cumulant;
    EXPECT_GE(c1.psi_ddot, 0.0);
    EXPECT_GE((c2.psi_dot - c1.psi_dot) * (t2 - t1), 0.0);
    // psi_dot against a finite difference of psi
    const double fd = calculus::richardson_first([&](double t) { return exp_family_curve(f, p0, t).cumulant.psi; }, t1, 1e-3);
    EXPECT_NEAR(fd, c1.psi_dot, 1e-8);
  }
}

TEST(EntropyFlowCurve, SpecValues) {
  EXPECT_LT(distance(entropy_flow_curve(kQuarter, 0.0), kQuarter), 1e-15);
  const ProbabilityVector half_power = entropy_flow_curve(kQuarter, std::log(2.0));
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(half_power[0], 1.0 / (1.0 + s3), 1e-15);
  EXPECT_NEAR(half_power[0], 0.3660254, 1e-7);
  EXPECT_NEAR(half_power[1], 0.6339746, 1e-7);
  EXPECT_LT(distance(entropy_flow_curve(kQuarter, 20.0), kHalf), 1e-8);
}

TEST(MixtureFlowCurve, SpecValuesAndInterval) {
  const FiberVector u(kHalf, {1.0, -1.0});
  const Interval iv = mixture_flow_interval(u);
  EXPECT_DOUBLE_EQ(iv.lo, -1.0);
  EXPECT_DOUBLE_EQ(iv.hi, 1.0);
  EXPECT_LT(distance(mixture_flow_curve(u, 0.5), ProbabilityVector({0.75, 0.25})), 1e-15);
  EXPECT_LT(distance(mixture_flow_curve(u, 0.0), kHalf), 1e-15);
  try {
    mixture_flow_curve(u, 1.0);
    FAIL() << "expected OutOfInterval";
  } catch (const OutOfInterval &e) {
    EXPECT_DOUBLE_EQ(e.lo(), -1.0);
    EXPECT_DOUBLE_EQ(e.hi(), 1.0);
  }
}

TEST(MixtureFlowCurve, ScoreIsMixtureTransport) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const ProbabilityVector p = random_probability(rng, 2 + k % 5);
    const FiberVector u = random_fiber(rng, p);
    const Interval iv = mixture_flow_interval(u);
    const double t = 0.5 * uniform(rng, std::max(iv.lo, -5.0), std::min(iv.hi, 5.0));
    auto curve = [&](double s) { return mixture_flow_curve(u, s); };
    const FiberVector s = score_of_curve(curve, t, 1e-5);
    EXPECT_LT(calculus::max_abs_diff(s.values(), m_transport(u, curve(t)).values()), 1e-8);
  }
}

TEST(HFlowCurve, SpecValues) {
  const FiberVector u(kHalf, {1.0, -1.0});
  EXPECT_LT(distance(h_flow_curve(u, 0.0), kHalf), 1e-15);
  EXPECT_LT(distance(h_flow_curve(u, std::numbers::pi / 6.0), ProbabilityVector({0.75, 0.25})), 1e-15);
  EXPECT_THROW(h_flow_curve(2.0 * u, 0.1), NormError);
  // (1 + sin t)/2 and (1 - sin t)/2 stay positive only for |t| < pi/2
  const Interval iv = h_flow_interval(u);
  EXPECT_NEAR(iv.lo, -std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(iv.hi, std::numbers::pi / 2.0, 1e-15);
  EXPECT_THROW(h_flow_curve(u, 2.0), OutOfInterval);
}

TEST(HFlowCurve, IntervalIsShorterThanPi) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const ProbabilityVector p = random_probability(rng, 2 + k % 6);
    const FiberVector u = random_unit_fiber(rng, p);
    const Interval iv = h_flow_interval(u);
    EXPECT_LT(iv.hi, std::numbers::pi);
    EXPECT_GT(iv.lo, -std::numbers::pi);
    EXPECT_NO_THROW(h_flow_curve(u, 0.99 * iv.hi));
    EXPECT_THROW(h_flow_curve(u, iv.hi + 1e-9), OutOfInterval);
  }
}

TEST(HFlowCurve, ScoreIsHilbertTransport) {
  Rng rng(6);
  for (int k = 0; k < 50; ++k) {
    const ProbabilityVector p = random_probability(rng, 2 + k % 5);
    const FiberVector u = random_unit_fiber(rng, p);
    const Interval iv = h_flow_interval(u);
    const double t = uniform(rng, 0.8 * iv.lo, 0.8 * iv.hi);
    auto curve = [&](double s) { return h_flow_curve(u, s); };
    const FiberVector s = score_of_curve(curve, t, 1e-5);
    EXPECT_LT(calculus::max_abs_diff(s.values(), h_transport(u, curve(t)).values()), 1e-8);
  }
}

TEST(Oracles, IntegratorMatchesClosedForms) {
  Rng rng(42);
  for (std::size_t n : {2u, 3u, 5u}) {
    const ProbabilityVector p0 = random_probability(rng, n);
    const RandomVariable f = random_variable(rng, n);
    const auto w0 = vec(p0.weights());
    const Trajectory ef = integrate_flow(expected_value_section(f), p0, 5.0);
    const Trajectory hf = integrate_flow(entropy_section(), p0, 5.0);
    for (std::size_t k = 0; k < ef.size(); k += 50) {
      const double t = ef.time(k);
      EXPECT_LT(distance(ef.point(k), ProbabilityVector(oracle::exp_family(vec(f.values()), w0, t))), 1e-6);
      std::vector<double> pw(n);
      for (std::size_t i = 0; i < n; ++i)
        pw[i] = std::pow(w0[i], std::exp(-t));
      EXPECT_LT(distance(hf.point(k), ProbabilityVector(oracle::normalized(pw))), 1e-6);
    }
  }
}

TEST(Trajectories, ScoresAreCentered) {
  Rng rng(8);
  const ProbabilityVector p0 = random_probability(rng, 4);
  const ProbabilityVector target = random_probability(rng, 4);
  for (const Trajectory &tr : {integrate_flow(entropy_section(), p0, 3.0),
                               integrate_flow(kl_first_section(target), p0, 3.0, 1e-3, Sign::minus),
                               integrate_flow(kl_second_section(target), p0, 3.0, 1e-3, Sign::minus)})
    for (std::size_t k = 0; k < tr.size(); ++k)
      EXPECT_LT(std::abs(expectation(tr.point(k), tr.score(k).values())), 1e-8);
}

TEST(GradientIdentity, DerivativeOfMeanAlongCurves) {
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + k % 5;
    const ProbabilityVector p = random_probability(rng, n);
    const FiberVector u = random_unit_fiber(rng, p);
    const RandomVariable g = random_variable(rng, n);
    auto curve = [&](double s) { return h_flow_curve(u, s); };
    const double t = uniform(rng, -0.3, 0.3);
    const double fd = calculus::richardson_first([&](double s) { return expectation(curve(s), g); }, t, 1e-3);
    const ProbabilityVector pt = curve(t);
    EXPECT_NEAR(fd, inner_product(center(g, pt), score_of_curve(curve, t, 1e-5)), 1e-6);
  }
}

TEST(GradientIdentity, EntropyLevelSetIsOrthogonalToGradient) {
  const ProbabilityVector p0({0.2, 0.3, 0.5});
  const std::vector<double> w0 = vec(p0.weights());
  const double h0 = oracle::entropy(w0);
  const std::vector<double> u{1.0, -0.5, 0.2};
  const std::vector<double> v = vec(grad_entropy(p0).values());
  // q(s) = p0 exp(s u + lambda(s) v) normalized, with H(q(s)) = H(p0)
  auto raw = [&](double s, double lambda) {
    std::vector<double> w(3);
    for (std::size_t i = 0; i < 3; ++i)
      w[i] = w0[i] * std::exp(s * u[i] + lambda * v[i]);
    return oracle::normalized(w);
  };
  auto level = [&](double s) {
    const double lambda = oracle::bisect([&](double l) { return oracle::entropy(raw(s, l)) - h0; }, -0.3, 0.3);
    return ProbabilityVector(raw(s, lambda));
  };
  for (double s : {-0.05, 0.0, 0.04, 0.1}) {
    const ProbabilityVector q = level(s);
    ASSERT_NEAR(entropy(q), h0, 1e-14);
    const FiberVector sp = score_of_curve(level, s, 1e-4);
    EXPECT_GT(norm(sp), 0.1);
    EXPECT_NEAR(inner_product(grad_entropy(q), sp), 0.0, 1e-6);
  }
}

TEST(MonitorGradientFlow, ExpectedValueDescentReachesTheVertex) {
  const RandomVariable f({0.0, 1.0, 2.0, 3.0});
  const ProbabilityVector p0 = ProbabilityVector::uniform(4);
  // loss -E_p[f]; its gradient section is -(f - E f), integrated with sign -1
  const Section section = [&](const ProbabilityVector &p) { return -grad_expected_value(f, p); };
  const Trajectory tr = integrate_flow(section, p0, 20.0, 1e-3, Sign::minus);
  const FlowMonitorReport r = monitor_gradient_flow(tr, [&](const ProbabilityVector &p) { return -expectation(p, f); });
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(r.terminal_argmax, 3u);
  const ProbabilityVector &end = tr.points().back();
  EXPECT_LT(std::max({end[0], end[1], end[2], 1.0 - end[3]}), 1e-3);
  EXPECT_LT(r.terminal_gradient_norm, 1e-3);
  EXPECT_NEAR(r.energy_residual, 0.0, 1e-6);
}

TEST(MonitorGradientFlow, ConstantObjectiveIsFlat) {
  const Trajectory tr = integrate_flow([](const ProbabilityVector &p) { return FiberVector::zero(p); }, kQuarter, 1.0);
  const FlowMonitorReport r = monitor_gradient_flow(tr, [](const ProbabilityVector &) { return 2.0; });
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(r.max_increase, 0.0);
  EXPECT_EQ(r.dissipation, 0.0);
  EXPECT_EQ(r.terminal_gradient_norm, 0.0);
}

TEST(MonitorGradientFlow, EntropyAscentReachesUniform) {
  Rng rng(10);
  for (int k = 0; k < 5; ++k) {
    const ProbabilityVector p0 = random_probability(rng, 3 + k);
    const Trajectory tr = integrate_flow(entropy_section(), p0, 20.0);
    EXPECT_LT(distance(tr.points().back(), ProbabilityVector::uniform(p0.size())), 1e-6);
    const FlowMonitorReport r = monitor_gradient_flow(tr, [](const ProbabilityVector &p) { return -entropy(p); });
    EXPECT_TRUE(r.monotone);
  }
}

TEST(MonitorGradientFlow, TiesResolveToTheLowestIndex) {
  const ProbabilityVector u = ProbabilityVector::uniform(3);
  const Trajectory tr = integrate_flow([](const ProbabilityVector &p) { return FiberVector::zero(p); }, u, 0.5);
  EXPECT_EQ(monitor_gradient_flow(tr, [](const ProbabilityVector &) { return 0.0; }).terminal_argmax, 0u);
}
