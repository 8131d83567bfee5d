#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "holowave/errors.hpp"
#include "holowave/morawetz.hpp"
#include "oracles/morawetz_oracles.hpp"

using namespace holowave;
using namespace testing;

namespace {

std::vector<WaveState> run(const WaveState& s0, double t_final, double dt) {
  StepperConfig c;
  c.dt = dt;
  SimulateOptions o;
  o.t_final = t_final;
  return simulate(s0, c, o).snapshots;
}

WaveState packet(int n, double length, const PhysicalParams& p, double a, double anchor = 0.0) {
  Grid g(n, length);
  std::vector<double> eta(n), psi(n);
  for (int i = 0; i < n; ++i) {
    double x = g.point(i) - 0.5 * length;
    eta[i] = a * std::exp(-x * x) * std::cos(2.0 * x);
    psi[i] = 0.5 * a * std::exp(-x * x) * std::sin(2.0 * x);
  }
  return state_from_eulerian(SpectralField::from_samples(g, eta), SpectralField::from_samples(g, psi), p,
                             anchor);
}

}  // namespace

TEST_SUITE("morawetz") {
  TEST_CASE("window multiplier") {
    WindowMultiplier w(1.3, 8.0);
    Grid g(512, 8.0);
    double integral = 0.0, mean_mx = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      double x = g.point(i);
      CHECK(w.chi(x) >= 0.0);
      integral += w.chi(x) * g.spacing();
      mean_mx += w.m_x(x) * g.spacing();
      double e = 1e-5;
      CHECK((w.m(x + e) - w.m(x - e)) / (2 * e) == doctest::Approx(w.m_x(x)).epsilon(1e-8));
      CHECK((w.chi(x + e) - w.chi(x - e)) / (2 * e) == doctest::Approx(w.chi_x(x)).epsilon(1e-6));
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mean_mx) <= 1e-12);
    CHECK(w.chi(1.3) == 1.0);
    CHECK(w.chi(2.3) == 0.0);
    CHECK(w.chi(1.3 + 8.0) == 1.0);
    CHECK(w.m(1.3 + 0.4) == doctest::Approx(-w.m(1.3 - 0.4)).epsilon(1e-14));
    // Continuous across the antipode.
    CHECK(std::abs(w.m(1.3 + 4.0 - 1e-12) - w.m(1.3 + 4.0 + 1e-12)) <= 1e-11);
    CHECK_THROWS_AS(WindowMultiplier(0.0, 2.0), InvalidArgument);
    CHECK(center_lattice(8.0).size() == 16u);
    CHECK(center_lattice(8.0)[3] == 1.5);
    CHECK_THROWS_AS(center_lattice(8.0, 0.0), InvalidArgument);
  }

  TEST_CASE("frequency envelope") {
    std::vector<double> single{0, 0, 3.0, 0, 0, 0};
    auto c = frequency_envelope(single, 0.1);
    for (int j = 0; j < 6; ++j) CHECK(c[j] == doctest::Approx(3.0 * std::exp2(-0.1 * std::abs(j - 2))));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(6);
      for (double& v : a) v = std::pow(10.0, -4.0 * u(rng));
      double delta = 0.05 + 0.4 * u(rng);
      auto env = frequency_envelope(a, delta);
      auto ref = oracles::relaxed_envelope(a, delta);
      for (int j = 0; j < 6; ++j) CHECK(std::abs(env[j] - ref[j]) <= 1e-9 * ref[j]);
      CHECK(oracles::is_envelope(env, a, delta));
      // Minimal: lowering any entry breaks a constraint.
      for (int j = 0; j < 6; ++j) {
        auto lower = env;
        lower[j] *= 1.0 - 1e-6;
        CHECK_FALSE(oracles::is_envelope(lower, a, delta));
      }
    }
    CHECK_THROWS_AS(frequency_envelope(single, 0.5), InvalidArgument);
    CHECK_THROWS_AS(frequency_envelope(single, 0.0), InvalidArgument);
  }

  TEST_CASE("momentum-level norm") {
    PhysicalParams p(1.0, 0.01, 1.0);  // lambda0 = 10
    Grid g(256, 2.0 * std::numbers::pi);
    SpectralField zero(g, Parity::Real);
    CHECK(e14_norm(zero, zero, p).value() == 0.0);
    CHECK(e0_norm(zero, zero, p) == 0.0);

    auto eta = cosine(g, 10, 1e-3);
    auto n = e14_norm(eta, zero, p);
    CHECK(n.eta_gravity == doctest::Approx(n.eta_capillary).epsilon(1e-10));
    CHECK(n.eta_gravity == doctest::Approx(std::pow(10.0, 0.25) * 1e-3 * std::sqrt(std::numbers::pi)).epsilon(1e-12));

    auto psi = random_real(g, 20, 3, false);
    auto eta2 = random_real(g, 20, 4, true);
    auto a = e14_norm(eta2, psi, p), b = e14_norm(0.37 * eta2, 0.37 * psi, p);
    CHECK(b.value() == doctest::Approx(0.37 * a.value()).epsilon(1e-12));
    CHECK(e0_norm(0.37 * eta2, 0.37 * psi, p) == doctest::Approx(0.37 * e0_norm(eta2, psi, p)).epsilon(1e-12));
    // Psi part ignores the potential's mean.
    auto shifted = psi;
    shifted[0] += 5.0;
    CHECK(e14_norm(eta2, shifted, p).psi == doctest::Approx(a.psi).epsilon(1e-14));
    // Gravity only: the capillary parts drop out.
    auto grav = e14_norm(eta2, psi, PhysicalParams(1.0, 0.0, 1.0));
    CHECK(grav.eta_capillary == 0.0);
    CHECK(std::isfinite(grav.psi));
    CHECK(grav.psi > a.psi);

    // |M| <= C E14^2 with C stable in the linear regime.
    PhysicalParams q(1.0, 0.01, 2.0);
    double r1 = empirical_constant({packet(128, 12.0, q, 1e-4)}).momentum_ratio;
    double r2 = empirical_constant({packet(128, 12.0, q, 1e-5)}).momentum_ratio;
    CHECK(r1 > 0.0);
    CHECK(r1 < 10.0);
    CHECK(r2 == doctest::Approx(r1).epsilon(1e-3));
  }

  TEST_CASE("uniform control norm") {
    PhysicalParams p(1.0, 0.01, 1.0);
    Grid g(256, 8.0 * std::numbers::pi);
    CHECK(xkappa_norm({flat_state(g, p)}).total() == 0.0);

    // One mode at a band centre: X is the X_0 norm of that mode.
    LittlewoodPaley lp(g, 1.0);
    double lam = lp.band_frequency(2);
    int j = static_cast<int>(std::lround(lam / g.fundamental()));
    REQUIRE(std::abs(j * g.fundamental() - lam) < 1e-12);
    double A = 1e-4;
    auto s = state_from_eulerian(cosine(g, j, A), SpectralField(g, Parity::Real), PhysicalParams(1.0, 0.0, 1.0));
    auto x = xkappa_norm({s});
    double expect = A * std::sqrt(g.length() / 2.0) * std::pow(lam, 1.5);
    CHECK(x.x == doctest::Approx(expect).epsilon(1e-6));  // eta from the map, O(A) correction
    CHECK(x.bands[2] == doctest::Approx(x.x).epsilon(1e-6));
    CHECK(x.x1 == 0.0);

    auto t1 = run(packet(128, 16.0, p, 1e-3), 0.5, 0.05);
    auto n1 = xkappa_norm(t1);
    CHECK(n1.x1 > 0.0);
    CHECK(n1.lambdas.size() == n1.bands.size());
    // Per-band sup over time is at least every time slice.
    auto n0 = xkappa_norm({t1.front()});
    for (std::size_t b = 0; b < n1.bands.size(); ++b) CHECK(n1.bands[b] >= n0.bands[b]);
    // Homogeneity on fixed data.
    auto [eta, psi] = eulerian_surface(t1.front());
    auto v = psi.derivative();
    CHECK(x0_norm(2.5 * eta, 2.5 * v, p) == doctest::Approx(2.5 * x0_norm(eta, v, p)).epsilon(1e-12));
    auto e1 = frequency_envelope(eta, v, p), e2 = frequency_envelope(2.5 * eta, 2.5 * v, p);
    for (std::size_t b = 0; b < e1.size(); ++b) CHECK(e2[b] == doctest::Approx(2.5 * e1[b]).epsilon(1e-12));
  }

  TEST_CASE("local energy norm") {
    Grid g(128, 8.0);
    PhysicalParams p(1.0, 0.01, 1.0);
    auto zero = std::vector<WaveState>{flat_state(g, p), flat_state(g, p)};
    zero[1].t = 1.0;
    CHECK(le_norm(zero).squared == 0.0);

    // Linear standing mode over one period against space-time quadrature.
    oracles::StandingMode mode{1e-6, 2.0 * g.fundamental(), 1.0, 0.01, 1.0};
    double period = 2.0 * std::numbers::pi / mode.omega();
    auto s0 = state_from_eulerian(cosine(g, 2, mode.amplitude), SpectralField(g, Parity::Real), p);
    auto traj = run(s0, period, period / 160);
    std::vector<double> centers{0.0, 0.5, 1.5, 3.0};
    auto le = le_norm(traj, centers);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double ref = oracles::standing_mode_local_energy(mode, centers[c], period);
      CHECK(le.per_center[c] == doctest::Approx(ref).epsilon(1e-6));
    }

    // Nonnegative density: monotone in T.
    auto nl = run(packet(64, 8.0, p, 0.02), 1.0, 0.05);
    std::vector<WaveState> half(nl.begin(), nl.begin() + nl.size() / 2 + 1);
    CHECK(le_norm(half).squared <= le_norm(nl).squared);
    auto full = le_norm(nl);
    CHECK(full.squared == *std::max_element(full.per_center.begin(), full.per_center.end()));

    // Gauge anchor and joint translation of data and window.
    auto base = packet(64, 8.0, p, 0.02);
    auto other = packet(64, 8.0, p, 0.02, 0.7);
    std::vector<double> cs{1.0, 3.5, 4.0};
    auto d0 = local_energy_density(base, cs), d1 = local_energy_density(other, cs);
    double scale = *std::max_element(d0.begin(), d0.end());
    for (std::size_t c = 0; c < cs.size(); ++c) CHECK(std::abs(d0[c] - d1[c]) <= 1e-8 * scale);
    auto [eta, psi] = eulerian_surface(base);
    auto eta_s = eta.real_samples(), psi_s = psi.real_samples();
    std::rotate(eta_s.begin(), eta_s.end() - 16, eta_s.end());  // shift by 2.0
    std::rotate(psi_s.begin(), psi_s.end() - 16, psi_s.end());
    auto moved = state_from_eulerian(SpectralField::from_samples(g.size() == 64 ? g : Grid(64, 8.0), eta_s),
                                     SpectralField::from_samples(Grid(64, 8.0), psi_s), p);
    std::vector<double> cs2{3.0, 5.5, 6.0};
    auto d2 = local_energy_density(moved, cs2);
    for (std::size_t c = 0; c < cs.size(); ++c) CHECK(std::abs(d0[c] - d2[c]) <= 1e-8 * scale);
  }

  TEST_CASE("Morawetz functional and flux") {
    PhysicalParams p(1.0, 0.01, 1.0);
    Grid g(64, 8.0);
    WindowMultiplier w(2.0, 8.0);
    auto flat = flat_state(g, p);
    CHECK(morawetz_functional(flat, w, 0.45) == 0.0);
    CHECK(flux_integral(flat, w, 0.45) == 0.0);
    auto s = packet(64, 8.0, p, 0.05);
    CHECK_THROWS_AS(flux_integral(s, w, 1.5), InvalidArgument);

    // sigma = 1 is the pure pair-2 flux.
    auto pairs = all_pairs(s);
    auto S2 = pairs[1].S.real_samples();
    double f = 0.0;
    for (int i = 0; i < g.size(); ++i) f += w.m_x(g.point(i)) * S2[i] * g.spacing();
    CHECK(flux_integral(s, w, 1.0) == doctest::Approx(f).epsilon(1e-14));
    CHECK(morawetz_functional(s, w, 1.0) ==
          doctest::Approx(momentum_weighted(pairs[1], [&](double x) { return w.m(x); })).epsilon(1e-14));

    // Identity closure converges at second order under dt-halving.
    std::vector<double> defects;
    for (double dt : {0.04, 0.02}) {
      auto tr = run(s, 1.0, dt);
      auto cl = morawetz_identity(tr, w, 0.45);
      CHECK(cl.times.size() == tr.size());
      CHECK(std::abs(cl.change) > 1e-6);
      defects.push_back(cl.defect());
    }
    CHECK(defects[0] / defects[1] > 3.5);
    CHECK_THROWS_AS(morawetz_identity({s}, w, 0.45), InsufficientHistory);
  }

  TEST_CASE("time quadrature") {
    std::vector<double> t, f;
    for (int i = 0; i <= 10; ++i) {
      t.push_back(0.1 * i);
      f.push_back(std::pow(0.1 * i, 3));
    }
    CHECK(time_integral(t, f, TimeRule::Simpson) == doctest::Approx(0.25).epsilon(1e-14));
    t.pop_back();
    f.pop_back();
    // Odd interval count falls back to the trapezoid.
    double trap = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) trap += 0.05 * (f[i] + f[i - 1]);
    CHECK(time_integral(t, f, TimeRule::Simpson) == doctest::Approx(trap).epsilon(1e-14));
    CHECK_THROWS_AS(time_integral(t, {1.0}, TimeRule::Trapezoid), InvalidArgument);
  }

  TEST_CASE("empirical constant") {
    PhysicalParams p(1.0, 0.01, 1.0);
    Grid g(64, 8.0);
    auto zero = empirical_constant({flat_state(g, p)});
    CHECK_FALSE(zero.constant_defined);
    CHECK(std::isnan(zero.constant));
    CHECK(zero.le.squared == 0.0);
    CHECK(zero.gate_passed);
    CHECK_THROWS_AS(empirical_constant({}), InsufficientHistory);

    auto tr = run(packet(64, 8.0, p, 1e-6), 2.0, 0.05);
    auto r = empirical_constant(tr);
    CHECK(r.constant_defined);
    CHECK(r.constant > 0.0);
    CHECK(r.gate_passed);
    CHECK(r.envelope.size() == r.xkappa.bands.size());
    for (std::size_t b = 0; b < r.envelope.size(); ++b) CHECK(r.envelope[b] >= r.xkappa.bands[b]);

    // Exact time rescaling of stored trajectories.
    for (double lambda : {0.5, 3.0}) {
      auto scaled = time_rescaled(tr, lambda);
      CHECK(scaled.back().t == doctest::Approx(tr.back().t / lambda));
      CHECK(scaled.back().params.kappa() == doctest::Approx(lambda * lambda * 0.01));
      CHECK(empirical_constant(scaled).constant == doctest::Approx(r.constant).epsilon(1e-6));
    }
    // Linear regime: C does not depend on the amplitude.
    auto small = empirical_constant(run(packet(64, 8.0, p, 1e-7), 2.0, 0.05));
    CHECK(small.constant == doctest::Approx(r.constant).epsilon(0.01));
    CHECK_THROWS_AS(time_rescaled(tr, 0.0), InvalidArgument);
  }
}
