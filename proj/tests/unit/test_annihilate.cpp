#include <gtest/gtest.h>

#include <cmath>

#include "dunkl/annihilate.hpp"
#include "dunkl/grid.hpp"
#include "dunkl/thinsets.hpp"

using namespace dunkl;

namespace {

constexpr double kR = 12.0;

struct Pair {
  SetUnion S;
  SetUnion Sigma;
  GridPtr space;
  TransformPtr op;
};

Pair comb_pair(double eps, int n, double k = 1.0) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(k);
  Pair p;
  p.S = generate_comb(eps, 11, cfg, 0xD01C).set;
  p.Sigma = generate_comb(eps, 11, cfg, 0xD01C + 1).set;
  p.space = adapted_grid(kR, n, cfg, {p.S});
  p.op = TransformOperator::build(p.space, adapted_grid(kR, n, cfg, {p.Sigma}));
  return p;
}

}  // namespace

TEST(PairConstants, Examples) {
  const PairConstants half = pair_constants(0.5);
  EXPECT_DOUBLE_EQ(half.D, 2.0);
  EXPECT_DOUBLE_EQ(half.C, 3.0);
  EXPECT_DOUBLE_EQ(pair_constants(0.0).C, 2.0);
  EXPECT_NEAR(pair_constants(0.999).C, 1001.0, 1e-9);
  EXPECT_THROW(pair_constants(1.0), std::domain_error);
  EXPECT_THROW(pair_constants(-0.1), std::domain_error);
}

TEST(AdaptedGrid, SetEndpointsArePanelEdges) {
  const SetUnion s = SetUnion::intervals({{1.3, 1.45}, {-1.45, -1.3}});
  const GridPtr g = adapted_grid(kR, 512, RootSystemConfig::rank_one(1.0), {s});
  // Exact membership quadrature: the weights inside S integrate the density exactly.
  double inside = 0.0;
  for (int i = 0; i < g->size(); ++i) inside += s.contains(g->x(i)) ? g->weight(i) : 0.0;
  EXPECT_NEAR(inside, s.measure(RootSystemConfig::rank_one(1.0)), 1e-12);
}

TEST(Projections, TrivialSets) {
  const GridPtr g = QuadratureGrid::build(kR, 1024, RootSystemConfig::rank_one(1.0));
  const TransformPtr op = TransformOperator::build(g);
  const SampledFunction f = SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-x * x), x * std::exp(-x * x)); });
  const SetUnion all = SetUnion::intervals({{-13.0, 13.0}});
  EXPECT_EQ((project_space(f, all) - f).max_abs(), 0.0);
  EXPECT_EQ(project_space(f, SetUnion::empty()).max_abs(), 0.0);
  EXPECT_EQ(project_freq(f, SetUnion::empty(), *op).max_abs(), 0.0);
  EXPECT_LT((project_freq(f, all, *op) - f).max_abs(), 1e-7);
}

TEST(OperatorNorm, TrivialSets) {
  const Pair p = comb_pair(0.05, 512);
  const SetUnion all = SetUnion::intervals({{-13.0, 13.0}});
  EXPECT_EQ(AnnihilationOperator(SetUnion::empty(), p.Sigma, p.op).norm().value, 0.0);
  EXPECT_EQ(AnnihilationOperator(p.S, SetUnion::empty(), p.op).norm().value, 0.0);
  EXPECT_NEAR(AnnihilationOperator(all, all, p.op).norm().value, 1.0, 1e-5);
}

TEST(OperatorNorm, SvdAndPowerAgree) {
  const Pair p = comb_pair(0.05, 1024);
  const AnnihilationOperator h(p.S, p.Sigma, p.op);
  const NormResult svd = h.norm(NormMethod::svd);
  const NormResult power = h.norm(NormMethod::power);
  EXPECT_LT(svd.value, 1.0);
  EXPECT_GT(svd.value, 0.0);
  EXPECT_NEAR(svd.value, power.value, 1e-8);
  EXPECT_TRUE(power.converged);
  EXPECT_NEAR(operator_norm(h), svd.value, 0.0);
}

TEST(OperatorNorm, DecreasesWithThinness) {
  double prev = 1.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    const Pair p = comb_pair(eps, 1024);
    const double v = AnnihilationOperator(p.S, p.Sigma, p.op).norm().value;
    EXPECT_LT(v, prev) << "eps=" << eps;
    prev = v;
  }
}

TEST(VerifyPair, EnsembleWithAdversarialMembers) {
  const Pair p = comb_pair(0.05, 1024);
  const AnnihilationOperator h(p.S, p.Sigma, p.op);
  const NormResult nr = h.norm();
  const PairConstants pc = pair_constants(nr.value);
  std::vector<SampledFunction> ens = schwartz_ensemble(p.space, 20, 0xD01C);
  for (SampledFunction& f : adversarial_members(h, nr)) ens.push_back(std::move(f));
  const OperatorReport r = verify_pair(ens, h, pc);
  EXPECT_TRUE(r.pass) << r.to_json().dump();
  EXPECT_LE(r.values["max_ratio"].get<double>(), pc.C);
}

TEST(VerifyPair, SupportedOutsideSGivesRatioAtMostOne) {
  const Pair p = comb_pair(0.05, 512);
  const AnnihilationOperator h(p.S, p.Sigma, p.op);
  const SampledFunction f = project_space(
      SampledFunction::sample_1d(p.space, [](double x) { return cplx(std::exp(-0.3 * x * x), 0.0); }),
      p.S.complement_within(-kR, kR));
  const PairTerms t = pair_terms(f, h);
  EXPECT_LE(t.norm / (t.outside_space + t.outside_freq), 1.0 + 1e-12);
}

// For smooth data the transform fits the frequency window, so both complement norms agree.
TEST(VerifyPair, ComplementNormsAgreeForSmoothData) {
  const Pair p = comb_pair(0.05, 512);
  const AnnihilationOperator h(p.S, p.Sigma, p.op);
  const SampledFunction f = SampledFunction::sample_1d(p.space, [](double x) { return cplx(std::exp(-0.3 * x * x), 0.0); });
  const PairTerms t = pair_terms(f, h);
  EXPECT_NEAR(t.outside_freq, t.outside_freq_direct, 1e-6 * t.norm);
}

TEST(TwoTime, EmptySetsGiveRatioOneHalf) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  const GridPtr g = QuadratureGrid::build(kR, 512, cfg);
  const std::vector<SampledFunction> ens = schwartz_ensemble(g, 5, 3);
  const TwoTimeResult r = verify_two_time(ens, SetUnion::empty(), SetUnion::empty(), 0.0, 1.0, pair_constants(0.0));
  for (const TwoTimeMember& m : r.members) EXPECT_NEAR(m.ratio, 0.5, 1e-12);
  EXPECT_TRUE(r.report.pass);
}

TEST(TwoTime, ShiftConsistency) {
  const Pair p = comb_pair(0.05, 512);
  const SetUnion B = dilate(p.Sigma, 2.0);
  const GridPtr g = adapted_grid(kR, 512, RootSystemConfig::rank_one(1.0), {p.S, B});
  const std::vector<SampledFunction> ens = schwartz_ensemble(g, 5, 9);
  const OperatorReport r = time_shift_consistency(ens, p.S, p.Sigma, 0.5, 1.0, pair_constants(0.2));
  EXPECT_TRUE(r.pass) << r.to_json().dump();
}

TEST(Ensemble, DeterministicForSeed) {
  const GridPtr g = QuadratureGrid::build(kR, 256, RootSystemConfig::rank_one(1.0));
  const auto a = schwartz_ensemble(g, 4, 5);
  const auto b = schwartz_ensemble(g, 4, 5);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ((a[i] - b[i]).max_abs(), 0.0);
}
