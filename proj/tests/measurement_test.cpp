#include <doctest.h>

#include <cmath>
#include <vector>

#include "ckqed/hilbert.hpp"
#include "ckqed/measurement.hpp"

using namespace ckqed;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kR = 1.0 / std::sqrt(2.0);

// The four-component atom-field state
//   (-|ee> + |gg>)(|-a,b> - |a,-b>) + i(|eg> + |ge>)(|a,b> - |-a,-b>)
// built directly from tensors, independent of the protocol drivers.
HybridState four_component_state(double a, double b, int n_a, int n_b) {
  auto coh2 = [&](double xa, double xb) {
    return tensor(coherent_state(CoherentLabel(xa, 0.0), n_a, true),
                  coherent_state(CoherentLabel(xb, 0.0), n_b, true));
  };
  auto qq = [&](int q1, int q2) {
    return tensor(qubit_state(q1 == 0 ? 1 : 0, q1 == 0 ? 0 : 1),
                  qubit_state(q2 == 0 ? 1 : 0, q2 == 0 ? 0 : 1));
  };
  const HybridState f = superpose(1.0, coh2(-a, b), -1.0, coh2(a, -b));
  const HybridState g = superpose(1.0, coh2(a, b), -1.0, coh2(-a, -b));
  const HybridState part1 = superpose(-1.0, tensor(qq(1, 1), f), 1.0, tensor(qq(0, 0), f));
  const HybridState part2 =
      superpose(Complex(0, 1), tensor(qq(0, 1), g), Complex(0, 1), tensor(qq(1, 0), g));
  return superpose(1.0, part1, 1.0, part2).normalized();
}

double closed_p1(double a, double b, double w) {
  const double s = 1 + 2 * w;
  return (std::exp(-4 * a * a / s) + std::exp(-4 * b * b / s) -
          2 * std::exp(-2 * (1 + w) * (a * a + b * b) / s)) / s;
}

double closed_p2(double a, double b, double w) {
  const double s = 1 + 2 * w;
  return (1 + std::exp(-4 * (a * a + b * b) / s) -
          2 * std::exp(-2 * (1 + w) * (a * a + b * b) / s)) / s;
}

// Test-side oracle: plain 2D Riemann quadrature of the Gaussian-weighted
// squared overlaps, using only the closed-form coherent overlap.
void oracle_quadrature(double a, double b, double w, double& p1, double& p2) {
  if (w == 0.0) {
    const double f = std::exp(-2 * a * a) - std::exp(-2 * b * b);
    const double g = 1 - std::exp(-2 * (a * a + b * b));
    p1 = f * f;
    p2 = g * g;
    return;
  }
  const int n = 1201;
  const double span = 8.0 * std::sqrt(w) + 6.0;
  const double h = 2 * span / (n - 1);
  std::vector<double> ga(n), gb(n), fa_m(n), fa_p(n), fb_m(n), fb_p(n), wa(n), wb(n);
  for (int i = 0; i < n; ++i) {
    const double x = a - span + i * h;
    const double y = b - span + i * h;
    fa_m[i] = std::exp(-(x + a) * (x + a) / 2);
    fa_p[i] = std::exp(-(x - a) * (x - a) / 2);
    fb_m[i] = std::exp(-(y + b) * (y + b) / 2);
    fb_p[i] = std::exp(-(y - b) * (y - b) / 2);
    wa[i] = std::exp(-(x - a) * (x - a) / (2 * w)) / std::sqrt(2 * kPi * w);
    wb[i] = std::exp(-(y - b) * (y - b) / (2 * w)) / std::sqrt(2 * kPi * w);
  }
  p1 = p2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double f = fa_m[i] * fb_p[j] - fa_p[i] * fb_m[j];
      const double g = fa_p[i] * fb_p[j] - fa_m[i] * fb_m[j];
      p1 += wa[i] * wb[j] * f * f;
      p2 += wa[i] * wb[j] * g * g;
    }
  p1 *= h * h;
  p2 *= h * h;
}

}  // namespace

TEST_CASE("project_atom: |+> measured in x gives + with probability 1") {
  const HybridState plus = qubit_state(kR, kR);
  const auto branches = project_atom(plus, 0, AtomAxis::X);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].label == "+");
  CHECK(branches[0].probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(branches[1].probability == doctest::Approx(0.0));
  CHECK_FALSE(branches[1].state.has_value());  // zero-probability marker
}

TEST_CASE("project_atom: y-measurement of the evolved transfer state") {
  // (a|g>|i alpha> - i b|e>|-i alpha>) measured on the atom in y.
  const double a = kR, b = kR, al = 2.0;
  const int n = default_n_max(al);
  const HybridState state =
      superpose(a, tensor(qubit_state(1, 0), coherent_state(CoherentLabel(0.0, al), n)),
                Complex(0, -b), tensor(qubit_state(0, 1), coherent_state(CoherentLabel(0.0, -al), n)))
          .normalized();
  const auto branches = project_atom(state, 0, AtomAxis::Y);
  const double ov = std::exp(-2 * al * al);
  // outcome -: (a|i alpha> + b|-i alpha>), norm (1 + 2ab e^{-2 a^2})^{-1/2}
  CHECK(branches[1].label == "-");
  CHECK(branches[1].probability == doctest::Approx((1 + 2 * a * b * ov) / 2).epsilon(1e-10));
  CHECK(branches[0].probability == doctest::Approx((1 - 2 * a * b * ov) / 2).epsilon(1e-10));
  const HybridState want =
      superpose(a, coherent_state(CoherentLabel(0.0, al), n), b,
                coherent_state(CoherentLabel(0.0, -al), n))
          .normalized();
  CHECK(branches[1].state->fidelity(want) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(branches[0].probability + branches[1].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project_atom: z basis labels") {
  const auto branches = project_atom(qubit_state(0, 1), 0, AtomAxis::Z);
  CHECK(branches[0].label == "e");
  CHECK(branches[0].probability == doctest::Approx(1.0));
  CHECK(branches[1].label == "g");
}

TEST_CASE("ideal_phase_projection: coherent input against {+chi, -chi}") {
  const double chi = 2.0;
  const int n = default_n_max(chi);
  const HybridState in = coherent_state(CoherentLabel(chi, 0.0), n);
  const auto branches =
      ideal_phase_projection(in, 0, {CoherentLabel(chi, 0.0), CoherentLabel(-chi, 0.0)});
  // weights 1 and e^{-4 chi^2}, normalized over the candidate set
  const double leak = std::exp(-4 * chi * chi);
  CHECK(branches[0].probability == doctest::Approx(1.0 / (1.0 + leak)).epsilon(1e-10));
  CHECK(branches[1].probability == doctest::Approx(leak / (1.0 + leak)).epsilon(1e-6));
}

TEST_CASE("ideal_phase_projection: orthogonal limit gives exactly {1, 0}") {
  const double chi = 20.0;
  const int n = default_n_max(chi);
  const HybridState in = coherent_state(CoherentLabel(chi, 0.0), n);
  const auto branches =
      ideal_phase_projection(in, 0, {CoherentLabel(chi, 0.0), CoherentLabel(-chi, 0.0)});
  CHECK(branches[0].probability == 1.0);
  CHECK(branches[1].probability == 0.0);
  CHECK_FALSE(branches[1].state.has_value());
}

TEST_CASE("ideal_phase_projection: support precondition is enforced") {
  const int n = default_n_max(3.0);
  const HybridState vacuum = coherent_state(CoherentLabel(0.0, 0.0), n, true);
  CHECK_THROWS_AS(
      ideal_phase_projection(vacuum, 0, {CoherentLabel(3.0, 0.0), CoherentLabel(-3.0, 0.0)}),
      PreconditionError);
}

TEST_CASE("ideal_phase_projection: probabilities are global-phase invariant") {
  const double chi = 1.5;
  const int n = default_n_max(chi);
  const HybridState in =
      superpose(0.8, coherent_state(CoherentLabel(chi, 0.0), n), 0.6,
                coherent_state(CoherentLabel(-chi, 0.0), n))
          .normalized();
  const HybridState phased(in.layout(), std::exp(Complex(0, 1.234)) * in.amplitudes());
  const std::vector<CoherentLabel> cands{CoherentLabel(chi, 0.0), CoherentLabel(-chi, 0.0)};
  const auto b1 = ideal_phase_projection(in, 0, cands);
  const auto b2 = ideal_phase_projection(phased, 0, cands);
  for (size_t k = 0; k < b1.size(); ++k)
    CHECK(b1[k].probability == doctest::Approx(b2[k].probability).epsilon(1e-13));
}

TEST_CASE("gaussian_cv_measurement: closed form vs kernel quadrature vs oracle") {
  for (const auto& [a, b, w] : std::vector<std::tuple<double, double, double>>{
           {1, 1, 0.0}, {1, 1, 2.0}, {2, 2, 3.0}, {3, 3, 1.0}, {1, 2, 3.0}, {2, 3, 5.0}}) {
    const int n_a = default_n_max(a), n_b = default_n_max(b);
    const HybridState state = four_component_state(a, b, n_a, n_b);
    const GaussianMeasurementResult res =
        gaussian_cv_measurement(state, {CoherentLabel(a, 0.0), CoherentLabel(b, 0.0), w});
    CHECK(std::abs(res.p1 - res.p1_closed) < 1e-4);
    CHECK(std::abs(res.p2 - res.p2_closed) < 1e-4);
    CHECK(std::abs(res.p1_closed - closed_p1(a, b, w)) < 1e-12);
    CHECK(std::abs(res.p2_closed - closed_p2(a, b, w)) < 1e-12);
    double o1 = 0, o2 = 0;
    oracle_quadrature(a, b, w, o1, o2);
    CHECK(std::abs(res.p1 - o1) < 1e-4);
    CHECK(std::abs(res.p2 - o2) < 1e-4);
    CHECK(res.out_of_block_weight < 1e-8);
    CHECK(std::abs(res.fidelity - res.fidelity_closed) < 1e-4);
  }
}

TEST_CASE("gaussian_cv_measurement: frozen spot values at alpha = beta = 2, width = 3") {
  const int n = default_n_max(2.0);
  const GaussianMeasurementResult res = gaussian_cv_measurement(
      four_component_state(2, 2, n, n), {CoherentLabel(2.0, 0.0), CoherentLabel(2.0, 0.0), 3.0});
  CHECK(res.p1 == doctest::Approx(0.02903).epsilon(1e-3));
  CHECK(res.p2 == doctest::Approx(0.14430).epsilon(1e-3));
  CHECK(res.fidelity == doctest::Approx(0.8325).epsilon(1e-3));
  // The fidelity of the conditioned state is p2/(p1 + p2) up to the weight
  // outside the {|phi_->, |psi_+>} block.
  CHECK(res.fidelity == doctest::Approx(res.p2 / (res.p1 + res.p2)).epsilon(1e-8));
}

TEST_CASE("gaussian_cv_measurement: width 0 reduces to the ideal projection") {
  const double a = 2.0, b = 1.0;
  const int n_a = default_n_max(a), n_b = default_n_max(b);
  const HybridState state = four_component_state(a, b, n_a, n_b);
  const GaussianMeasurementResult res =
      gaussian_cv_measurement(state, {CoherentLabel(a, 0.0), CoherentLabel(b, 0.0), 0.0});
  // Project both modes onto |a>, |b> directly.
  HybridState q = project_out(coherent_state(CoherentLabel(a, 0.0), n_a).amplitudes(), 2, state);
  q = project_out(coherent_state(CoherentLabel(b, 0.0), n_b).amplitudes(), 2, q);
  const DensityOperator want = q.normalized().to_density();
  CHECK((res.rho12.matrix() - want.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(res.quadrature_error == 0.0);
}

TEST_CASE("gaussian_cv_measurement: P1 vanishes for alpha = beta at width 0") {
  const int n = default_n_max(2.0);
  const GaussianMeasurementResult res = gaussian_cv_measurement(
      four_component_state(2, 2, n, n), {CoherentLabel(2.0, 0.0), CoherentLabel(2.0, 0.0), 0.0});
  CHECK(std::abs(res.p1) < 1e-12);
}

TEST_CASE("gaussian_cv_measurement: rejects complex centers and bad layouts") {
  const int n = default_n_max(1.0);
  const HybridState state = four_component_state(1, 1, n, n);
  CHECK_THROWS_AS(
      gaussian_cv_measurement(state, {CoherentLabel(0.0, 1.0), CoherentLabel(1.0, 0.0), 1.0}),
      PreconditionError);
  CHECK_THROWS_AS(gaussian_cv_measurement(qubit_state(1, 0),
                                          {CoherentLabel(1.0, 0.0), CoherentLabel(1.0, 0.0), 1.0}),
                  PreconditionError);
}

TEST_CASE("homodyne_phase_discriminator: vacuum-bound input leaves the probe grounded") {
  const double a = 2.0;
  const int n = default_n_max(2 * a);
  const JCParams probe{0.0, 1.0, kPi};
  const HomodyneResult dark = homodyne_phase_discriminator(
      coherent_state(CoherentLabel(0.0, -a), n, true), 0, CoherentLabel(a, 0.0), probe);
  CHECK(dark.ground_probability == doctest::Approx(1.0).epsilon(1e-10));

  // alpha = 0 degenerate case: the mode is already vacuum.
  const HomodyneResult vac = homodyne_phase_discriminator(
      coherent_state(CoherentLabel(0.0, 0.0), 10), 0, CoherentLabel(0.0, 0.0), probe);
  CHECK(vac.ground_probability == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("homodyne_phase_discriminator: bright input excites the probe") {
  const double a = 2.0;
  const int n = default_n_max(2 * a);
  const JCParams probe{0.0, 1.0, kPi};
  const HomodyneResult bright = homodyne_phase_discriminator(
      coherent_state(CoherentLabel(0.0, a), n, true), 0, CoherentLabel(a, 0.0), probe);
  CHECK(bright.ground_probability < 1.0 - 1e-3);

  // Oracle: resonant evolution of |2 i a> layer by layer,
  // P(g) = sum_n |c_n|^2 cos^2(pi sqrt(n)).
  const HybridState big = coherent_state(CoherentLabel(0.0, 2 * a), n);
  double expected = 0.0;
  for (int k = 0; k <= n; ++k)
    expected += std::norm(big.amplitudes()(k)) * std::pow(std::cos(kPi * std::sqrt(k)), 2);
  CHECK(bright.ground_probability == doctest::Approx(expected).epsilon(1e-7));

  double total = 0.0;
  for (const auto& br : bright.branches) total += br.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("homodyne_phase_discriminator: probe must be resonant") {
  const int n = default_n_max(4.0);
  CHECK_THROWS_AS(
      homodyne_phase_discriminator(coherent_state(CoherentLabel(0.0, 2.0), n, true), 0,
                                   CoherentLabel(2.0, 0.0), JCParams{5.0, 1.0, kPi}),
      PreconditionError);
}
