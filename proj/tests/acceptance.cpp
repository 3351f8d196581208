// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and runtime budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ckqed/dynamics.hpp"
#include "ckqed/entanglement.hpp"
#include "ckqed/hilbert.hpp"
#include "ckqed/measurement.hpp"
#include "ckqed/protocols.hpp"

using namespace ckqed;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Checker {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const ProtocolBranch& branch(const ProtocolReport& rep, const std::string& label) {
  for (const ProtocolBranch& b : rep.branches)
    if (b.label == label) return b;
  throw std::runtime_error("missing branch " + label);
}

HybridState atom_field(Complex g_amp, Complex e_amp, CoherentLabel alpha, int n_max) {
  return tensor(qubit_state(g_amp, e_amp), coherent_state(alpha, n_max, true));
}

// --- criterion 1: conditional-phase contract -------------------------------

void criterion_1(Checker& c) {
  for (const double a : {1.0, 2.0, 3.0}) {
    const int n = default_n_max(a);
    const Matrix cp = dispersive_propagator({kPi / 2, +1}, n).matrix;
    const HybridState in_e = atom_field(0, 1, CoherentLabel(a, 0.0), n);
    const HybridState want_e = atom_field(0, Complex(0, -1), CoherentLabel(0.0, -a), n);
    const double fe = HybridState(in_e.layout(), cp * in_e.amplitudes()).fidelity(want_e);
    c.require(fe >= 1.0 - 1e-10, "e-input map fidelity " + std::to_string(fe));
    const HybridState in_g = atom_field(1, 0, CoherentLabel(a, 0.0), n);
    const HybridState want_g = atom_field(1, 0, CoherentLabel(0.0, a), n);
    const double fg = HybridState(in_g.layout(), cp * in_g.amplitudes()).fidelity(want_g);
    c.require(fg >= 1.0 - 1e-10, "g-input map fidelity " + std::to_string(fg));
  }
}

// --- criterion 2: exact vs dispersive --------------------------------------

void criterion_2(Checker& c) {
  const double delta = 50.0, lambda = 1.0;
  const double t = (kPi / 2) * delta / (lambda * lambda);
  const int n = default_n_max(2.0);
  const Matrix exact = exact_jc_propagator({delta, lambda, t}, n).matrix;
  const Matrix frame = rotating_frame({delta, lambda, t}, n).matrix;
  const Matrix approx = dispersive_propagator({kPi / 2, +1}, n).matrix;
  for (const bool excited : {true, false}) {
    const HybridState in =
        atom_field(excited ? 0.0 : 1.0, excited ? 1.0 : 0.0, CoherentLabel(2.0, 0.0), n);
    const double f = HybridState(in.layout(), frame * (exact * in.amplitudes()))
                         .fidelity(HybridState(in.layout(), approx * in.amplitudes()));
    c.require(f >= 0.99,
              std::string(excited ? "e" : "g") + "-input fidelity " + std::to_string(f));
  }
}

// --- criterion 3: branch probabilities -------------------------------------

void criterion_3(Checker& c) {
  const ProtocolReport rep =
      entanglement_transfer(CoherentLabel(0.0, -1.0), CoherentLabel(0.0, -1.0));
  const double e4 = std::exp(-4.0);
  const double p_same = (1 - e4) / 4, p_diff = (1 + e4) / 4;
  c.require(std::abs(branch(rep, "(+,+)").probability - p_same) < 1e-8, "(+,+) probability");
  c.require(std::abs(branch(rep, "(-,-)").probability - p_same) < 1e-8, "(-,-) probability");
  c.require(std::abs(branch(rep, "(+,-)").probability - p_diff) < 1e-8, "(+,-) probability");
  c.require(std::abs(branch(rep, "(-,+)").probability - p_diff) < 1e-8, "(-,+) probability");
}

// --- criterion 4: one-ebit structure ----------------------------------------

void criterion_4(Checker& c) {
  for (const double gamma : {0.3, 1.0, 3.0}) {
    const ProtocolReport rep =
        entanglement_transfer(CoherentLabel(0.0, -gamma), CoherentLabel(0.0, -gamma));
    for (const char* label : {"(+,+)", "(-,-)"}) {
      const double vne = *branch(rep, label).vne_bits;
      c.require(std::abs(vne - 1.0) < 1e-9,
                "equal-outcome VNE at gamma " + std::to_string(gamma));
    }
  }
  const ProtocolReport low =
      entanglement_transfer(CoherentLabel(0.0, -0.5), CoherentLabel(0.0, -0.5));
  c.require(std::abs(*branch(low, "(+,-)").vne_bits - 0.3138) < 1e-3,
            "opposite-outcome VNE at gamma 0.5");
  const ProtocolReport high =
      entanglement_transfer(CoherentLabel(0.0, -3.0), CoherentLabel(0.0, -3.0));
  c.require(*branch(high, "(+,-)").vne_bits > 1.0 - 1e-6, "opposite-outcome VNE at gamma 3");
}

// --- criterion 5: fidelity formula ------------------------------------------

double closed_form_fidelity(double a, double b, double w) {
  const double s = 1 + 2 * w;
  const double p1 = (std::exp(-4 * a * a / s) + std::exp(-4 * b * b / s) -
                     2 * std::exp(-2 * (1 + w) * (a * a + b * b) / s)) / s;
  const double p2 = (1 + std::exp(-4 * (a * a + b * b) / s) -
                     2 * std::exp(-2 * (1 + w) * (a * a + b * b) / s)) / s;
  return p2 / (p1 + p2);
}

// Independent oracle: dense Riemann quadrature of the Gaussian-weighted
// overlaps, closed-form integrand only.
double oracle_fidelity(double a, double b, double w) {
  if (w == 0.0) {
    const double f = std::exp(-2 * a * a) - std::exp(-2 * b * b);
    const double g = 1 - std::exp(-2 * (a * a + b * b));
    return g * g / (f * f + g * g);
  }
  const int n = 1501;
  const double span = 8.0 * std::sqrt(w) + 6.0;
  const double h = 2 * span / (n - 1);
  double p1 = 0, p2 = 0;
  std::vector<double> fam(n), fap(n), fbm(n), fbp(n), wa(n), wb(n);
  for (int i = 0; i < n; ++i) {
    const double x = a - span + i * h;
    const double y = b - span + i * h;
    fam[i] = std::exp(-(x + a) * (x + a) / 2);
    fap[i] = std::exp(-(x - a) * (x - a) / 2);
    fbm[i] = std::exp(-(y + b) * (y + b) / 2);
    fbp[i] = std::exp(-(y - b) * (y - b) / 2);
    wa[i] = std::exp(-(x - a) * (x - a) / (2 * w)) / std::sqrt(2 * kPi * w);
    wb[i] = std::exp(-(y - b) * (y - b) / (2 * w)) / std::sqrt(2 * kPi * w);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double f = fam[i] * fbp[j] - fap[i] * fbm[j];
      const double g = fap[i] * fbp[j] - fam[i] * fbm[j];
      p1 += wa[i] * wb[j] * f * f;
      p2 += wa[i] * wb[j] * g * g;
    }
  return p2 / (p1 + p2);
}

void criterion_5(Checker& c) {
  for (const double amp : {2.0, 3.0}) {
    for (const double width : {0.0, 1.0, 3.0, 5.0}) {
      const ProtocolReport rep = reciprocation(CoherentLabel(amp, 0.0), CoherentLabel(amp, 0.0),
                                               width, ReciprocationMode::Gaussian);
      const double simulated = rep.diagnostics.at("fidelity_quadrature");
      const double closed = rep.diagnostics.at("fidelity_closed");
      const double oracle = oracle_fidelity(amp, amp, width);
      const std::string tag =
          " at alpha " + std::to_string(amp) + " width " + std::to_string(width);
      c.require(std::abs(simulated - closed) < 1e-4, "simulated vs closed" + tag);
      c.require(std::abs(simulated - oracle) < 1e-4, "simulated vs oracle" + tag);
      c.require(std::abs(closed - oracle) < 1e-4, "closed vs oracle" + tag);
    }
  }
  c.require(std::abs(closed_form_fidelity(2, 2, 3) - 0.8325) < 1e-3, "spot value F(2,2,3)");
  c.require(std::abs(closed_form_fidelity(3, 3, 3) - 0.9884) < 1e-3, "spot value F(3,3,3)");
  for (double width = 0.25; width <= 5.0; width += 0.25)
    c.require(closed_form_fidelity(3, 3, width) > closed_form_fidelity(2, 2, width),
              "curve ordering at width " + std::to_string(width));
}

// --- criterion 6: round trip -------------------------------------------------

void criterion_6(Checker& c) {
  const ProtocolReport transfer =
      entanglement_transfer(CoherentLabel(0.0, -3.0), CoherentLabel(0.0, -3.0));
  const HybridState& cv = *branch(transfer, "(+,+)").state;
  const ProtocolReport rep = reciprocation(CoherentLabel(0.0, -3.0), CoherentLabel(0.0, -3.0),
                                           0.0, ReciprocationMode::Ideal, cv);
  for (const ProtocolBranch& br : rep.branches)
    c.require(*br.fidelity >= 1.0 - 1e-5, "round-trip fidelity on branch " + br.label);
}

// --- criterion 7: multi-pair --------------------------------------------------

void criterion_7(Checker& c) {
  const ProtocolReport two = multipair_transfer(2, CoherentLabel(6.0, 0.0), "++++");
  c.require(*branch(two, "++++").vne_bits >= 2.0 - 1e-3, "n=2 VNE");

  const ProtocolReport single =
      entanglement_transfer(CoherentLabel(0.0, -2.0), CoherentLabel(0.0, -2.0));
  for (const auto& [multi_label, single_label] :
       std::vector<std::pair<std::string, std::string>>{
           {"++", "(+,+)"}, {"+-", "(+,-)"}, {"-+", "(-,+)"}, {"--", "(-,-)"}}) {
    const ProtocolReport multi = multipair_transfer(1, CoherentLabel(0.0, -2.0), multi_label);
    const ProtocolBranch& mb = branch(multi, multi_label);
    const ProtocolBranch& sb = branch(single, single_label);
    c.require(std::abs(mb.probability - sb.probability) < 1e-12,
              "n=1 probability on " + multi_label);
    c.require(mb.state->fidelity(*sb.state) >= 1.0 - 1e-10, "n=1 state on " + multi_label);
  }
}

// --- criterion 8: swap ---------------------------------------------------------

void criterion_8(Checker& c) {
  const ProtocolReport rep = entanglement_swap(CoherentLabel(2.0, 0.0));
  for (const ProtocolBranch& br : rep.branches)
    c.require(*br.vne_bits >= 0.999, "hybrid VNE on branch " + br.label);

  const int n = default_n_max(4.0);
  const HomodyneResult dark = homodyne_phase_discriminator(
      coherent_state(CoherentLabel(0.0, -2.0), n, true), 0, CoherentLabel(2.0, 0.0),
      JCParams{0.0, 1.0, kPi});
  c.require(std::abs(dark.ground_probability - 1.0) < 1e-10, "vacuum-branch probe probability");
}

// --- criterion 9: property suites ----------------------------------------------

void criterion_9(Checker& c) {
  // Unitarity of every propagator family.
  for (const JCParams p : {JCParams{0.0, 1.0, 1.1}, JCParams{7.0, 1.4, 2.3},
                           JCParams{-20.0, 0.8, 5.0}, JCParams{50.0, 1.0, 25 * kPi}})
    c.require(exact_jc_propagator(p, 24).unitarity_defect() < 1e-10, "JC unitarity");
  for (const double phi : {0.0, 0.3, kPi / 2, kPi})
    for (const int sign : {+1, -1})
      c.require(dispersive_propagator({phi, sign}, 24).unitarity_defect() < 1e-10,
                "dispersive unitarity");
  for (const double chi : {0.0, 0.9, kPi})
    c.require(ising_gate(chi).unitarity_defect() < 1e-10, "Ising unitarity");
  c.require(rotating_frame({50.0, 1.0, 3.0}, 24).unitarity_defect() < 1e-10, "frame unitarity");

  // Branch-probability completeness across the protocol set.
  auto total = [](const ProtocolReport& rep) {
    double p = 0;
    for (const auto& b : rep.branches) p += b.probability;
    return p;
  };
  c.require(std::abs(total(transfer_qubit_to_qubit(0.6, 0.8)) - 1) < 1e-8, "sum q->q");
  c.require(
      std::abs(total(transfer_qubit_to_cv(0.6, 0.8, CoherentLabel(2.0, 0.0), true)) - 1) < 1e-8,
      "sum q->cv");
  c.require(std::abs(total(entanglement_transfer(CoherentLabel(0.0, -1.0),
                                                 CoherentLabel(0.0, -1.0))) -
                     1) < 1e-8,
            "sum transfer");
  c.require(std::abs(total(reciprocation(CoherentLabel(2.0, 0.0), CoherentLabel(2.0, 0.0), 2.0,
                                         ReciprocationMode::Gaussian)) -
                     1) < 1e-8,
            "sum reciprocation");
  c.require(std::abs(total(multipair_transfer(2, CoherentLabel(2.0, 0.0), "++++")) - 1) < 1e-8,
            "sum multipair");
  c.require(std::abs(total(entanglement_swap(CoherentLabel(2.0, 0.0))) - 1) < 1e-8, "sum swap");

  // Global-phase invariance of the reported metrics.
  {
    const ProtocolReport transfer =
        entanglement_transfer(CoherentLabel(0.0, -2.0), CoherentLabel(0.0, -2.0));
    const HybridState& cv = *branch(transfer, "(+,+)").state;
    const HybridState cv_phased(cv.layout(), std::exp(Complex(0, 1.37)) * cv.amplitudes());
    const ProtocolReport base = reciprocation(CoherentLabel(0.0, -2.0), CoherentLabel(0.0, -2.0),
                                              0.0, ReciprocationMode::Ideal, cv);
    const ProtocolReport shifted =
        reciprocation(CoherentLabel(0.0, -2.0), CoherentLabel(0.0, -2.0), 0.0,
                      ReciprocationMode::Ideal, cv_phased);
    for (size_t k = 0; k < base.branches.size(); ++k) {
      c.require(std::abs(base.branches[k].probability - shifted.branches[k].probability) < 1e-12,
                "phase invariance: probability");
      c.require(std::abs(*base.branches[k].fidelity - *shifted.branches[k].fidelity) < 1e-12,
                "phase invariance: fidelity");
      c.require(std::abs(*base.branches[k].vne_bits - *shifted.branches[k].vne_bits) < 1e-12,
                "phase invariance: VNE");
    }
  }

  // Gram orthonormality of the coherent qubit bases.
  for (const auto& [a, b] : std::vector<std::pair<Complex, Complex>>{{{1.0, 0.0}, {-1.0, 0.0}},
                                                                     {{0.0, 2.0}, {0.0, -2.0}},
                                                                     {{1.5, 0.5}, {-0.5, 1.0}},
                                                                     {{3.0, 0.0}, {0.0, 3.0}}}) {
    const int n = std::max(default_n_max(std::abs(a)), default_n_max(std::abs(b)));
    const CoherentQubitBasis basis = coherent_qubit_basis(CoherentLabel(a), CoherentLabel(b), n);
    const Matrix gram = basis.isometry().adjoint() * basis.isometry();
    c.require((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8,
              "basis orthonormality");
  }

  // Coherent-overlap table against the closed form.
  const std::vector<Complex> labels = {{0.0, 0.0}, {1.0, 0.0}, {-2.0, 0.0},
                                       {0.0, 2.0}, {1.0, 1.0}, {3.0, 0.0}};
  for (const Complex mu : labels)
    for (const Complex nu : labels) {
      const int n = std::max(default_n_max(std::abs(mu)), default_n_max(std::abs(nu)));
      const Complex numeric = coherent_state(CoherentLabel(mu), n, true)
                                  .inner(coherent_state(CoherentLabel(nu), n, true));
      c.require(std::abs(numeric - coherent_overlap(CoherentLabel(mu), CoherentLabel(nu))) < 1e-8,
                "overlap table");
    }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<void(Checker&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "conditional-phase contract", 1.0, criterion_1},
      {2, "exact vs dispersive propagator", 5.0, criterion_2},
      {3, "entanglement-transfer branch probabilities", 5.0, criterion_3},
      {4, "one-ebit branch structure", 10.0, criterion_4},
      {5, "reciprocation fidelity formula", 60.0, criterion_5},
      {6, "transfer/reciprocation round trip", 60.0, criterion_6},
      {7, "multi-pair transfer", 120.0, criterion_7},
      {8, "entanglement swap and homodyne", 60.0, criterion_8},
      {9, "property suites", 120.0, criterion_9},
  };

  int failures = 0;
  for (const Criterion& entry : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.body(checker);
    } catch (const std::exception& e) {
      checker.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checker.require(seconds < entry.budget_seconds,
                    "runtime " + std::to_string(seconds) + "s over budget");
    if (checker.ok) {
      std::printf("criterion %d (%s): PASS [%.2fs]\n", entry.number, entry.name, seconds);
    } else {
      std::printf("criterion %d (%s): FAIL [%.2fs] %s\n", entry.number, entry.name, seconds,
                  checker.detail.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
