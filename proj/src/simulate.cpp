#include "qpar/simulate.hpp"

#include <cmath>
#include <sstream>

#include "qpar/error.hpp"
#include "qpar/rng.hpp"

namespace qpar {

namespace {

std::uint64_t bit_stride(int qubit, int n_total) {
  return std::uint64_t{1} << (n_total - 1 - qubit);
}

void apply_one_qubit(const Mat2& u, int qubit, int n_total, Eigen::VectorXcd& amps) {
  const std::uint64_t s = bit_stride(qubit, n_total);
  const std::uint64_t size = amps.size();
  for (std::uint64_t base = 0; base < size; base += 2 * s) {
    for (std::uint64_t i = base; i < base + s; ++i) {
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + s];
      amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
      amps[i + s] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void apply_controlled(const Mat2& u, int control, int target, int n_total,
                      Eigen::VectorXcd& amps) {
  const std::uint64_t sc = bit_stride(control, n_total);
  const std::uint64_t st = bit_stride(target, n_total);
  const std::uint64_t size = amps.size();
  for (std::uint64_t base = 0; base < size; base += 2 * st) {
    for (std::uint64_t i = base; i < base + st; ++i) {
      if (!(i & sc)) continue;
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + st];
      amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
      amps[i + st] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void apply_cnot(int control, int target, int n_total, Eigen::VectorXcd& amps) {
  const std::uint64_t sc = bit_stride(control, n_total);
  const std::uint64_t st = bit_stride(target, n_total);
  const std::uint64_t size = amps.size();
  for (std::uint64_t base = 0; base < size; base += 2 * st) {
    for (std::uint64_t i = base; i < base + st; ++i) {
      if (i & sc) std::swap(amps[i], amps[i + st]);
    }
  }
}

void apply_gate(const Gate& g, int n_total, Eigen::VectorXcd& amps) {
  if (const auto* o = std::get_if<OneQubitGate>(&g)) {
    apply_one_qubit(o->u, o->qubit, n_total, amps);
  } else if (const auto* c = std::get_if<ControlledUGate>(&g)) {
    apply_controlled(c->u, c->control, c->target, n_total, amps);
  } else if (const auto* x = std::get_if<CnotGate>(&g)) {
    apply_cnot(x->control, x->target, n_total, amps);
  } else if (const auto* s = std::get_if<SymmetricPhaseGate>(&g)) {
    const std::uint64_t mask = bit_stride(s->q1, n_total) | bit_stride(s->q2, n_total);
    const Complex phase = std::polar(1.0, s->theta);
    const std::uint64_t size = amps.size();
    for (std::uint64_t i = 0; i < size; ++i)
      if ((i & mask) == mask) amps[i] *= phase;
  } else if (const auto* d = std::get_if<DiagonalGate>(&g)) {
    const int k = static_cast<int>(d->qubits.size());
    std::vector<Complex> table(d->phases.size());
    for (std::size_t t = 0; t < table.size(); ++t)
      table[t] = std::polar(1.0, d->phases[t]);
    std::vector<std::uint64_t> strides(k);
    for (int j = 0; j < k; ++j) strides[j] = bit_stride(d->qubits[j], n_total);
    const std::uint64_t size = amps.size();
    for (std::uint64_t i = 0; i < size; ++i) {
      std::size_t idx = 0;
      for (int j = 0; j < k; ++j)
        idx = (idx << 1) | ((i & strides[j]) ? 1u : 0u);
      amps[i] *= table[idx];
    }
  }
}

}  // namespace

StateVector StateVector::basis(int n, std::uint64_t b) {
  StateVector sv;
  sv.n = n;
  sv.amps = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  sv.amps[b] = 1.0;
  return sv;
}

void apply_in_place(const Circuit& c, StateVector& state, int max_qubits) {
  if (state.n != c.width_total())
    throw PreconditionError("apply: circuit width " + std::to_string(c.width_total()) +
                            " does not match state width " + std::to_string(state.n));
  if (state.n > max_qubits)
    throw SimSizeError("apply: " + std::to_string(state.n) + " qubits exceeds cap " +
                       std::to_string(max_qubits));
  for (const Gate& g : c.gates) apply_gate(g, state.n, state.amps);
  if (c.global_phase != 0.0) state.amps *= std::polar(1.0, c.global_phase);
}

StateVector apply(const Circuit& c, const StateVector& state, int max_qubits) {
  StateVector out = state;
  apply_in_place(c, out, max_qubits);
  return out;
}

StateVector apply(const LayeredCircuit& c, const StateVector& state, int max_qubits) {
  return apply(flatten(c), state, max_qubits);
}

ComplexMatrix full_unitary(const Circuit& c, int max_qubits) {
  const int n = c.width_total();
  if (n > max_qubits)
    throw SimSizeError("full_unitary: " + std::to_string(n) + " qubits exceeds cap " +
                       std::to_string(max_qubits));
  const std::int64_t dim = std::int64_t{1} << n;
  ComplexMatrix u(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    StateVector col = StateVector::basis(n, j);
    apply_in_place(c, col, max_qubits);
    u.col(j) = col.amps;
  }
  return u;
}

ComplexMatrix full_unitary(const LayeredCircuit& c, int max_qubits) {
  return full_unitary(flatten(c), max_qubits);
}

Gf2Matrix gf2_simulate(const Circuit& c) {
  const int n = c.width_total();
  Gf2Matrix m = Gf2Matrix::identity(n);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto* x = std::get_if<CnotGate>(&c.gates[i]);
    if (!x)
      throw PreconditionError("gf2_simulate: gate " + std::to_string(i) + " is " +
                              gate_kind_name(c.gates[i]) + ", not cnot");
    m.add_row(x->control, x->target);
  }
  return m;
}

Gf2Matrix gf2_simulate(const LayeredCircuit& c) { return gf2_simulate(flatten(c)); }

PhaseVector phase_vector(const Circuit& c) {
  const int n = c.width_total();
  if (n > SIM_MAX_QUBITS)
    throw SimSizeError("phase_vector: " + std::to_string(n) + " qubits exceeds cap " +
                       std::to_string(SIM_MAX_QUBITS));
  PhaseVector pv = PhaseVector::zeros(n);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto dv = as_diagonal(c.gates[i]);
    if (!dv)
      throw PreconditionError("phase_vector: gate " + std::to_string(i) + " is " +
                              gate_kind_name(c.gates[i]) + ", not diagonal");
    const int k = static_cast<int>(dv->qubits.size());
    std::vector<std::uint64_t> strides(k);
    for (int j = 0; j < k; ++j) strides[j] = bit_stride(dv->qubits[j], n);
    const std::uint64_t size = pv.omega.size();
    for (std::uint64_t b = 0; b < size; ++b) {
      std::size_t idx = 0;
      for (int j = 0; j < k; ++j)
        idx = (idx << 1) | ((b & strides[j]) ? 1u : 0u);
      pv.omega[b] += dv->phases[idx];
    }
  }
  if (c.global_phase != 0.0)
    for (double& w : pv.omega) w += c.global_phase;
  return pv;
}

PhaseVector phase_vector(const LayeredCircuit& c) { return phase_vector(flatten(c)); }

EmbeddingReport verify_embedding(const Circuit& reference, const Circuit& candidate,
                                 double tol, std::uint64_t seed, int max_qubits) {
  const int n = reference.width_total();
  const int total = candidate.width_total();
  if (total < n)
    throw PreconditionError("verify_embedding: candidate is narrower than reference");
  if (total > max_qubits)
    throw SimSizeError("verify_embedding: " + std::to_string(total) +
                       " qubits exceeds cap " + std::to_string(max_qubits));
  const int m = total - n;
  const std::uint64_t data_dim = std::uint64_t{1} << n;
  const std::uint64_t anc_mask = (std::uint64_t{1} << m) - 1;

  EmbeddingReport report;
  report.seed = seed;
  report.exhaustive = data_dim <= 256;

  std::vector<std::uint64_t> inputs;
  if (report.exhaustive) {
    inputs.resize(data_dim);
    for (std::uint64_t x = 0; x < data_dim; ++x) inputs[x] = x;
  } else {
    Rng rng(seed);
    inputs.resize(256);
    for (auto& x : inputs) x = rng.next_u64() % data_dim;
  }

  Complex shared_phase(1.0, 0.0);
  bool phase_fixed = false;
  for (const std::uint64_t x : inputs) {
    StateVector full = StateVector::basis(total, x << m);
    apply_in_place(candidate, full, max_qubits);
    StateVector ref_out = StateVector::basis(n, x);
    apply_in_place(reference, ref_out, max_qubits);

    const std::uint64_t size = full.amps.size();
    for (std::uint64_t b = 0; b < size; ++b) {
      if (b & anc_mask)
        report.max_leakage = std::max(report.max_leakage, std::abs(full.amps[b]));
    }

    if (!phase_fixed) {
      Eigen::Index best = 0;
      ref_out.amps.cwiseAbs().maxCoeff(&best);
      const Complex num = full.amps[static_cast<std::uint64_t>(best) << m];
      const Complex den = ref_out.amps[best];
      if (std::abs(den) > 1e-12 && std::abs(num) > 1e-12)
        shared_phase = (num / den) / std::abs(num / den);
      phase_fixed = true;
      report.global_phase_applied = std::arg(shared_phase);
    }

    for (std::uint64_t y = 0; y < data_dim; ++y) {
      const Complex diff = full.amps[y << m] - shared_phase * ref_out.amps[y];
      report.max_block_deviation = std::max(report.max_block_deviation, std::abs(diff));
    }
  }

  report.subspace_preserved = report.max_leakage <= tol;
  report.pass = report.subspace_preserved && report.max_block_deviation <= tol;
  return report;
}

EmbeddingReport verify_embedding(const Circuit& reference,
                                 const LayeredCircuit& candidate, double tol,
                                 std::uint64_t seed, int max_qubits) {
  return verify_embedding(reference, flatten(candidate), tol, seed, max_qubits);
}

Gf2EmbeddingReport verify_gf2_embedding(const Gf2Matrix& reference,
                                        const Circuit& candidate) {
  const int n = reference.dim();
  const int total = candidate.width_total();
  if (total < n)
    throw PreconditionError("verify_gf2_embedding: candidate is narrower than reference");
  const Gf2Matrix m = gf2_simulate(candidate);

  Gf2EmbeddingReport report;
  report.data_block_matches = true;
  report.ancilla_rows_clean = true;
  report.ancilla_block_identity = true;
  for (int i = 0; i < n && report.data_block_matches; ++i)
    for (int j = 0; j < n; ++j)
      if (m.get(i, j) != reference.get(i, j)) {
        report.data_block_matches = false;
        break;
      }
  for (int i = n; i < total; ++i) {
    for (int j = 0; j < n; ++j)
      if (m.get(i, j)) report.ancilla_rows_clean = false;
    for (int j = n; j < total; ++j)
      if (m.get(i, j) != (i == j)) report.ancilla_block_identity = false;
  }
  report.pass = report.data_block_matches && report.ancilla_rows_clean;
  return report;
}

Gf2EmbeddingReport verify_gf2_embedding(const Gf2Matrix& reference,
                                        const LayeredCircuit& candidate) {
  return verify_gf2_embedding(reference, flatten(candidate));
}

PhaseVector embedded_phase_vector(const Circuit& candidate, int width_data) {
  const int total = candidate.width_total();
  if (width_data < 1 || width_data > total)
    throw PreconditionError("embedded_phase_vector: bad data width");
  if (width_data > SIM_MAX_QUBITS)
    throw SimSizeError("embedded_phase_vector: data register exceeds cap");

  PhaseVector pv = PhaseVector::zeros(width_data);
  std::vector<std::uint8_t> bits(total);
  const std::uint64_t data_dim = std::uint64_t{1} << width_data;
  for (std::uint64_t x = 0; x < data_dim; ++x) {
    for (int q = 0; q < total; ++q)
      bits[q] = q < width_data ? (x >> (width_data - 1 - q)) & 1 : 0;
    double phase = candidate.global_phase;
    for (std::size_t i = 0; i < candidate.gates.size(); ++i) {
      if (const auto* cx = std::get_if<CnotGate>(&candidate.gates[i])) {
        bits[cx->target] ^= bits[cx->control];
        continue;
      }
      const auto dv = as_diagonal(candidate.gates[i]);
      if (!dv)
        throw PreconditionError("embedded_phase_vector: gate " + std::to_string(i) +
                                " is " + gate_kind_name(candidate.gates[i]) +
                                ", neither cnot nor diagonal");
      std::size_t idx = 0;
      for (int q : dv->qubits) idx = (idx << 1) | bits[q];
      phase += dv->phases[idx];
    }
    for (int q = 0; q < total; ++q) {
      const std::uint8_t expect =
          q < width_data ? (x >> (width_data - 1 - q)) & 1 : 0;
      if (bits[q] != expect)
        throw PreconditionError(
            "embedded_phase_vector: embedded action is not diagonal (wire " +
            std::to_string(q) + " changed on basis state " + std::to_string(x) + ")");
    }
    pv.omega[x] = phase;
  }
  return pv;
}

PhaseVector embedded_phase_vector(const LayeredCircuit& candidate, int width_data) {
  return embedded_phase_vector(flatten(candidate), width_data);
}

}  // namespace qpar
