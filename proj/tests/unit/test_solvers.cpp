#include <gtest/gtest.h>

#include <cmath>

#include "boussinesq/norms.hpp"
#include "boussinesq/solvers.hpp"

using namespace bouss;

namespace {

std::shared_ptr<const Mesh> square(int n) {
  return std::make_shared<const Mesh>(barycentric_refine(generate_unit_square_mesh(n)));
}

ProblemData cavity_data(double ri, double t_left = 0.0, double t_right = 1.0) {
  ProblemData d;
  d.nu = 0.1;
  d.kappa = 0.1;
  d.ri = ri;
  d.temperature_bc[kTagLeft] = TemperatureCondition::dirichlet(t_left);
  d.temperature_bc[kTagRight] = TemperatureCondition::dirichlet(t_right);
  d.temperature_bc[kTagTop] = TemperatureCondition::neumann();
  d.temperature_bc[kTagBottom] = TemperatureCondition::neumann();
  return d;
}

SolverConfig config(Method m, int depth = 0) {
  SolverConfig c;
  c.method = m;
  c.depth = depth;
  c.tolerance = 1e-10;
  c.max_iters = 50;
  return c;
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  for (const auto& name : method_names()) {
    const auto m = parse_method(name);
    ASSERT_TRUE(m) << name;
    EXPECT_EQ(to_string(*m), name);
  }
  EXPECT_FALSE(parse_method("nwton"));
  for (Status s : {Status::running, Status::converged, Status::max_iters, Status::diverged})
    EXPECT_EQ(parse_status(to_string(s)), s);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.tolerance = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.depth = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ProblemData, MissingTagRejected) {
  auto d = cavity_data(0.0);
  d.temperature_bc.erase(kTagTop);
  EXPECT_THROW(DiscreteProblem(square(2), d), std::invalid_argument);
}

TEST(EstimateOrder, QuadraticSequence) {
  std::vector<double> r;
  for (int k = 0; k < 5; ++k) r.push_back(std::pow(10.0, -std::pow(2.0, k)));
  // 1e-1 .. 1e-16; the last one sits below the floor and is skipped
  const auto q = estimate_order(r);
  ASSERT_TRUE(q);
  EXPECT_NEAR(*q, 2.0, 1e-12);
}

TEST(EstimateOrder, LinearSequence) {
  std::vector<double> r;
  for (int k = 0; k < 20; ++k) r.push_back(std::pow(0.5, k));
  EXPECT_NEAR(*estimate_order(r), 1.0, 1e-12);
  EXPECT_NEAR(*estimate_ratio(r), 0.5, 1e-12);
}

TEST(EstimateOrder, TooFewResiduals) {
  const std::vector<double> r{1e-1, 1e-2, 1e-3};
  EXPECT_FALSE(estimate_order(r));
  EXPECT_FALSE(estimate_ratio(r));
}

TEST(Iterate, ZeroDataConvergesImmediately) {
  const DiscreteProblem prob(square(2), cavity_data(1.0, 0.0, 0.0));
  for (Method m : {Method::picard, Method::newton, Method::picard_newton, Method::aa_picard_newton}) {
    const auto h = iterate(prob, config(m, 1));
    EXPECT_EQ(h.status, Status::converged) << to_string(m);
    EXPECT_EQ(h.iterations(), 1) << to_string(m);
    EXPECT_EQ(h.records[0].residual, 0.0);
    EXPECT_EQ(h.final_state.u.norm(), 0.0);
  }
}

TEST(Iterate, ConductionStateWithoutBuoyancy) {
  // Ri = 0: velocity stays zero and the temperature is the linear profile
  const DiscreteProblem prob(square(3), cavity_data(0.0));
  const auto h = iterate(prob, config(Method::picard_newton));
  ASSERT_EQ(h.status, Status::converged);
  EXPECT_LT(h.final_state.u.norm(), 1e-12);
  const auto& disc = prob.disc();
  for (int i = 0; i < disc.num_nodes(); ++i) EXPECT_NEAR(h.final_state.T[i], disc.node(i).x, 1e-12);
}

TEST(PicardTemperature, DecoupledFromVelocityEquation) {
  const DiscreteProblem prob(square(3), cavity_data(10.0));
  const Eigen::VectorXd t = picard_temperature(prob, Eigen::VectorXd::Zero(prob.disc().velocity_size()));
  for (int i = 0; i < prob.disc().num_nodes(); ++i) EXPECT_NEAR(t[i], prob.disc().node(i).x, 1e-12);
}

TEST(Steps, PicardNewtonIsNewtonAtPicardImage) {
  const DiscreteProblem prob(square(2), cavity_data(10.0));
  const State x = prob.initial_state();
  const State a = picard_newton_step(prob, x);
  const State b = newton_step(prob, picard_step(prob, x));
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.T, b.T);
  EXPECT_EQ(a.p, b.p);
}

TEST(Steps, AndersonDepthZeroIsPicardNewton) {
  const DiscreteProblem prob(square(2), cavity_data(10.0));
  auto hist = make_aa_history(prob, 0);
  State x = prob.initial_state(), y = x;
  for (int k = 0; k < 3; ++k) {
    x = aa_picard_newton_step(prob, x, hist, 0);
    y = picard_newton_step(prob, y);
    EXPECT_EQ(x.u, y.u);
    EXPECT_EQ(x.T, y.T);
  }
}

TEST(Steps, SolutionIsFixedPointOfEveryMethod) {
  const DiscreteProblem prob(square(3), cavity_data(10.0));
  auto cfg = config(Method::newton);
  cfg.tolerance = 1e-13;
  const auto h = iterate(prob, cfg);
  ASSERT_EQ(h.status, Status::converged);
  const State& x = h.final_state;
  for (const State& y : {picard_step(prob, x), newton_step(prob, x), picard_newton_step(prob, x)}) {
    EXPECT_LT(b_norm_diff(prob.disc(), x, y, 0.1, 0.1), 1e-11);
    EXPECT_LT((x.p - y.p).norm(), 1e-9);
  }
}

TEST(Steps, PressureHasZeroMean) {
  const DiscreteProblem prob(square(2), cavity_data(10.0));
  const State x = newton_step(prob, prob.initial_state());
  EXPECT_NEAR(prob.disc().pressure_weights().dot(x.p), 0.0, 1e-13);
}

TEST(Iterate, Deterministic) {
  const DiscreteProblem prob(square(2), cavity_data(50.0));
  const auto a = iterate(prob, config(Method::aa_picard_newton, 2));
  const auto b = iterate(prob, config(Method::aa_picard_newton, 2));
  EXPECT_EQ(a.residuals(), b.residuals());
  EXPECT_EQ(a.final_state.u, b.final_state.u);
}

TEST(Iterate, NewtonConvergesQuadratically) {
  const DiscreteProblem prob(square(3), cavity_data(20.0));
  auto cfg = config(Method::newton);
  cfg.tolerance = 1e-13;
  const auto h = iterate(prob, cfg);
  ASSERT_EQ(h.status, Status::converged);
  const auto q = estimate_order(h);
  ASSERT_TRUE(q);
  EXPECT_GT(*q, 1.6);
}

TEST(Iterate, MaxItersStatus) {
  const DiscreteProblem prob(square(2), cavity_data(100.0));
  auto cfg = config(Method::picard);
  cfg.max_iters = 2;
  const auto h = iterate(prob, cfg);
  EXPECT_EQ(h.status, Status::max_iters);
  EXPECT_EQ(h.iterations(), 2);
  EXPECT_EQ(h.records.back().status, Status::max_iters);
  EXPECT_EQ(h.records.front().status, Status::running);
}

TEST(Iterate, BlowupIsDiverged) {
  const DiscreteProblem prob(square(2), cavity_data(1e10));
  auto cfg = config(Method::newton);
  cfg.blowup_threshold = 1e3;
  const auto h = iterate(prob, cfg);
  EXPECT_EQ(h.status, Status::diverged);
  EXPECT_FALSE(h.message.empty());
}

TEST(StackFields, RoundTrip) {
  const DiscreteProblem prob(square(2), cavity_data(1.0));
  State s = prob.initial_state();
  s.u.setLinSpaced(-1, 1);
  s.p.setConstant(3);
  const State back = unstack_fields(stack_fields(s), s);
  EXPECT_EQ(back.u, s.u);
  EXPECT_EQ(back.T, s.T);
  EXPECT_EQ(back.p, s.p);
}
