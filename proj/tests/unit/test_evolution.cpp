#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "holowave/errors.hpp"
#include "holowave/evolution.hpp"

using namespace holowave;
using namespace testing;

namespace {

WaveState wave(const Grid& g, const PhysicalParams& p, double a, double anchor = 0.0) {
  auto eta = cosine(g, 2, a) + sine(g, 3, 0.4 * a);
  auto psi = sine(g, 2, 0.8 * a) + cosine(g, 1, 0.3 * a);
  return state_from_eulerian(eta, psi, p, anchor);
}

double diff(const WaveState& a, const WaveState& b) {
  return std::max((a.W - b.W).max_abs(), (a.Q - b.Q).max_abs());
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("flat state is an exact equilibrium") {
    Grid g(64, 8.0);
    PhysicalParams p(1.0, 0.01, 1.0);
    auto s = flat_state(g, p);
    auto d = rhs(s);
    CHECK(d.W_t.max_abs() == 0.0);
    CHECK(d.Q_t.max_abs() == 0.0);
    CHECK(compute_F(s).max_abs() == 0.0);
    StepperConfig cfg;
    auto next = step(s, cfg);
    CHECK(next.W.max_abs() == 0.0);
    CHECK(next.Q.max_abs() == 0.0);
    CHECK(next.t == doctest::Approx(resolve_dt(cfg, s)));
  }

  TEST_CASE("F is holomorphic and linearises to Q_alpha") {
    Grid g(128, 2.0 * std::numbers::pi);
    PhysicalParams p(1.0, 0.0, 1.0);
    double prev = 0.0;
    for (double a : {1e-3, 5e-4}) {
      auto s = wave(g, p, a);
      auto F = compute_F(s);
      CHECK(is_holomorphic(F, s.strip_depth()));
      double d = (F - s.Q.derivative()).without_mean().l2_norm();
      if (prev > 0.0) CHECK(std::log2(prev / d) == doctest::Approx(2.0).epsilon(0.05));
      prev = d;
    }
  }

  TEST_CASE("gauge fixing") {
    Grid g(128, 8.0);
    PhysicalParams p(1.0, 0.01, 1.0);
    auto s = wave(g, p, 0.02, 1.7);
    auto F = compute_F(s);
    auto fixed = gauge_fix(F, s, 1.7);
    complex t0 = 1.0 + s.W.derivative().evaluate(1.7);
    CHECK(std::abs((fixed.evaluate(1.7) * t0).real()) <= 1e-10);
    auto shifted = F;
    shifted[0] += 0.37;
    CHECK((gauge_fix(shifted, s, 1.7) - fixed).max_abs() <= 1e-14);
    auto flat = flat_state(g, p);
    CHECK(gauge_fix(compute_F(flat), flat, 0.0).max_abs() == 0.0);
  }

  TEST_CASE("rhs linearisation") {
    Grid g(128, 2.0 * std::numbers::pi);
    PhysicalParams p(1.0, 0.05, 1.0);
    double prev_w = 0.0, prev_q = 0.0;
    for (double a : {1e-3, 5e-4}) {
      auto s = wave(g, p, a);
      auto d = rhs(s);
      double hs = s.strip_depth();
      auto lin_w = -s.Q.derivative();
      // The capillary term sits inside P_h, so in finite depth its linear
      // part is 2 kappa P_h[Im W_aa]; it equals -i kappa W_aa only when h is
      // infinite.
      auto lin_q = p.g() * tilbert(s.W, hs) +
                   2.0 * p.kappa() * project_holomorphic(s.W.derivative(2).imag_part(), hs);
      double ew = (d.W_t - lin_w).without_mean().l2_norm();
      double eq = (d.Q_t - lin_q).without_mean().l2_norm();
      if (prev_w > 0.0) {
        CHECK(std::log2(prev_w / ew) == doctest::Approx(2.0).epsilon(0.05));
        CHECK(std::log2(prev_q / eq) == doctest::Approx(2.0).epsilon(0.05));
      }
      prev_w = ew;
      prev_q = eq;
    }
  }

  TEST_CASE("infinite-depth capillary linearisation is -i kappa W_aa") {
    Grid g(128, 2.0 * std::numbers::pi);
    auto W = holomorphic_from_real(cosine(g, 3, 1.0), kInfiniteDepth);
    auto lin = 2.0 * project_holomorphic(W.derivative(2).imag_part(), kInfiniteDepth);
    CHECK((lin - complex(0.0, -1.0) * W.derivative(2)).max_abs() <= 1e-12);
  }

  TEST_CASE("capillary term is linear in kappa and absent at kappa = 0") {
    Grid g(128, 2.0 * std::numbers::pi);
    auto s0 = wave(g, PhysicalParams(1.0, 0.0, 1.0), 0.02);
    auto make = [&](double kappa) {
      WaveState s = s0;
      s.params = PhysicalParams(1.0, kappa, 1.0);
      return rhs(s);
    };
    auto r0 = make(0.0);
    auto r1 = make(0.01);
    auto r2 = make(0.02);
    CHECK((r1.W_t - r0.W_t).max_abs() == 0.0);
    auto c1 = r1.Q_t - r0.Q_t;
    auto c2 = r2.Q_t - r0.Q_t;
    CHECK(c1.max_abs() > 0.0);
    CHECK((c2 - 2.0 * c1).max_abs() <= 1e-12 * c2.max_abs());
  }

  TEST_CASE("rk4 self-convergence is fourth order") {
    Grid g(64, 2.0 * std::numbers::pi);
    PhysicalParams p(1.0, 0.0, 1.0);
    auto s = wave(g, p, 0.02);
    StepperConfig cfg;
    cfg.filter_strength = 0.0;
    auto run = [&](double dt) {
      cfg.dt = dt;
      SimulateOptions o;
      o.t_final = 1.0;
      o.keep_snapshots = false;
      WaveState last = s;
      simulate(s, cfg, o, [&](const WaveState& st) { last = st; });
      return last;
    };
    auto a = run(0.1);
    auto b = run(0.05);
    auto c = run(0.025);
    double ratio = diff(a, b) / diff(b, c);
    CHECK(std::log2(ratio) == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("hamiltonian and momentum") {
    Grid g(128, 8.0);
    PhysicalParams p(1.0, 0.01, 1.0);
    auto flat = flat_state(g, p);
    CHECK(hamiltonian(flat) == 0.0);
    CHECK(momentum(flat) == 0.0);

    // Small standing mode at rest: energy is (g + kappa k^2) a^2 L / 4 to O(a^3).
    double a = 1e-4;
    double k = g.fundamental() * 3;
    auto s = state_from_eulerian(cosine(g, 3, a), SpectralField(g, Parity::Real), p);
    double expect = (p.g() + p.kappa() * k * k) * a * a * g.length() / 4.0;
    CHECK(hamiltonian(s) == doctest::Approx(expect).epsilon(1e-3));

    auto w = wave(g, p, 0.03);
    auto [eta, psi] = eulerian_surface(w);
    auto ex = eta.real_samples();
    auto px = psi.derivative().real_samples();
    double m = 0.0;
    for (int i = 0; i < g.size(); ++i) m += ex[i] * px[i];
    m *= g.spacing();
    CHECK(std::abs(momentum(w) - m) <= 1e-10 * std::abs(m));
  }

  TEST_CASE("observables do not depend on the gauge anchor") {
    Grid g(128, 8.0);
    PhysicalParams p(1.0, 0.01, 1.0);
    auto eta = cosine(g, 2, 0.03) + sine(g, 5, 0.01);
    auto psi = sine(g, 2, 0.02);
    auto a = state_from_eulerian(eta, psi, p, 0.0);
    auto b = state_from_eulerian(eta, psi, p, 3.3);
    CHECK(std::abs(hamiltonian(a) - hamiltonian(b)) <= 1e-10 * std::abs(hamiltonian(a)));
    CHECK(std::abs(momentum(a) - momentum(b)) <= 1e-10 * std::abs(momentum(a)));
    StepperConfig cfg;
    auto a1 = step(a, cfg);
    auto b1 = step(b, cfg);
    auto [ea, pa] = eulerian_surface(a1);
    auto [eb, pb] = eulerian_surface(b1);
    CHECK((ea - eb).max_abs() <= 1e-10);
    CHECK((pa - pb).max_abs() <= 1e-10);
  }

  TEST_CASE("vanishing surface tension is a continuous limit") {
    Grid g(64, 2.0 * std::numbers::pi);
    auto s0 = wave(g, PhysicalParams(1.0, 0.0, 1.0), 0.01);
    auto s1 = s0;
    s1.params = PhysicalParams(1.0, 1e-8, 1.0);
    StepperConfig cfg;
    cfg.dt = 0.02;
    SimulateOptions o;
    o.t_final = 1.0;
    auto t0 = simulate(s0, cfg, o);
    auto t1 = simulate(s1, cfg, o);
    double d = diff(t0.snapshots.back(), t1.snapshots.back());
    CHECK(d > 0.0);
    CHECK(d <= 1e-8);
  }

  TEST_CASE("mass is conserved while the conformal level moves") {
    Grid g(128, 2.0 * std::numbers::pi);
    auto s = wave(g, PhysicalParams(1.0, 0.01, 1.0), 0.05);
    auto mass = [](const WaveState& st) { return eulerian_surface(st).first.integral().real(); };
    double m0 = mass(s);
    StepperConfig cfg;
    cfg.dt = 0.01;
    SimulateOptions o;
    o.t_final = 1.0;
    o.keep_snapshots = false;
    WaveState last = s;
    simulate(s, cfg, o, [&](const WaveState& st) { last = st; });
    CHECK(std::abs(mass(last) - m0) <= 1e-11);
    CHECK(std::abs(last.level - s.level) > 1e-7);
    // The level stays the alpha-mean of the surface height.
    auto rebuilt = build_conformal_map(eulerian_surface(last).first, 1.0);
    CHECK(rebuilt.level() == doctest::Approx(last.level).epsilon(1e-9));
  }

  TEST_CASE("steep data blows up") {
    Grid g(64, 2.0 * std::numbers::pi);
    PhysicalParams p(1.0, 0.0, 1.0);
    auto W = holomorphic_from_real(cosine(g, 4, 0.3), 1.0);
    WaveState s(W, SpectralField(g), p);
    CHECK_THROWS_AS(step(s, StepperConfig{}), BlowUp);
  }

  TEST_CASE("checkpoint round trip is byte exact") {
    Grid g(64, 8.0);
    auto s = wave(g, PhysicalParams(1.0, 0.01, kInfiniteDepth), 0.02, 0.5);
    s.t = 1.25;
    std::stringstream a;
    write_checkpoint(a, s);
    auto back = read_checkpoint(a);
    std::stringstream b;
    write_checkpoint(b, back);
    CHECK(a.str() == b.str());
    CHECK(back.params == s.params);
    CHECK(back.t == s.t);
    std::stringstream junk("not a checkpoint");
    CHECK_THROWS_AS(read_checkpoint(junk), InvalidArgument);
  }
}
