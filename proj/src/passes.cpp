#include "qpar/passes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qpar/constants.hpp"
#include "qpar/error.hpp"
#include "qpar/gf2.hpp"
#include "qpar/simulate.hpp"

namespace qpar {

namespace {

int ceil_log2(std::size_t x) {
  int bits = 0;
  std::size_t cap = 1;
  while (cap < x) {
    cap <<= 1;
    ++bits;
  }
  return bits;
}

void push_layer(LayeredCircuit& c, std::vector<Gate> layer) {
  if (!layer.empty()) c.layers.push_back(std::move(layer));
}

void require_no_ancillae(const Circuit& input, const char* pass) {
  if (input.width_ancilla != 0)
    throw PreconditionError(std::string(pass) +
                            ": input must not already carry ancillae");
}

Gate replace_qubit(Gate g, int from, int to) {
  if (auto* o = std::get_if<OneQubitGate>(&g)) {
    if (o->qubit == from) o->qubit = to;
  } else if (auto* c = std::get_if<ControlledUGate>(&g)) {
    if (c->control == from) c->control = to;
    if (c->target == from) c->target = to;
  } else if (auto* x = std::get_if<CnotGate>(&g)) {
    if (x->control == from) x->control = to;
    if (x->target == from) x->target = to;
  } else if (auto* s = std::get_if<SymmetricPhaseGate>(&g)) {
    if (s->q1 == from) s->q1 = to;
    if (s->q2 == from) s->q2 = to;
  } else if (auto* d = std::get_if<DiagonalGate>(&g)) {
    for (int& q : d->qubits)
      if (q == from) q = to;
  }
  return g;
}

// Copy-tree layers doubling one source wire onto `copies`; returns the layers
// in creation order (reverse them to uncopy).
std::vector<std::vector<Gate>> copy_tree_layers(int source,
                                                const std::vector<int>& copies) {
  std::vector<std::vector<Gate>> layers;
  std::size_t made = 0;
  while (made < copies.size()) {
    const std::size_t fresh = std::min(made + 1, copies.size() - made);
    std::vector<Gate> layer;
    for (std::size_t i = 0; i < fresh; ++i) {
      const int src = i == 0 ? source : copies[i - 1];
      layer.push_back(CnotGate{src, copies[made + i]});
    }
    made += fresh;
    layers.push_back(std::move(layer));
  }
  return layers;
}

void append_reversed(LayeredCircuit& c, const std::vector<std::vector<Gate>>& layers) {
  for (auto it = layers.rbegin(); it != layers.rend(); ++it)
    push_layer(c, *it);
}

}  // namespace

PassResult permute_with_ancillae(const Permutation& p) {
  if (!p.is_valid())
    throw PreconditionError("permute_with_ancillae: not a valid permutation");
  const int n = p.size();

  PassResult result;
  result.circuit.width_data = n;
  result.circuit.width_ancilla = n;
  result.ancillae_used = n;
  result.claimed_depth_bound = 4;

  std::vector<int> moved;
  for (int i = 0; i < n; ++i)
    if (p.images[i] != i) moved.push_back(i);
  if (moved.empty()) {
    result.notes = "all fixed points elided";
    return result;
  }

  std::vector<Gate> copy_out, cancel_data, copy_back, cancel_anc;
  for (int i : moved) {
    copy_out.push_back(CnotGate{i, n + i});
    cancel_data.push_back(CnotGate{n + i, i});
    copy_back.push_back(CnotGate{n + i, p.images[i]});
    cancel_anc.push_back(CnotGate{p.images[i], n + i});
  }
  push_layer(result.circuit, std::move(copy_out));
  push_layer(result.circuit, std::move(cancel_data));
  push_layer(result.circuit, std::move(copy_back));
  push_layer(result.circuit, std::move(cancel_anc));

  std::ostringstream notes;
  notes << moved.size() << " of " << n << " wires moved";
  result.notes = notes.str();
  return result;
}

PassResult permute_no_ancillae(const Permutation& p) {
  if (!p.is_valid())
    throw PreconditionError("permute_no_ancillae: not a valid permutation");
  const int n = p.size();

  // Each cycle v_0 → v_1 → ... → v_{k-1} → v_0 is the composition of the two
  // reflections i ↦ -i and i ↦ 1-i (indices mod k); pairs from different
  // cycles are disjoint, so each reflection is one set of parallel swaps.
  std::vector<std::pair<int, int>> first_set, second_set;
  for (const auto& cycle : p.cycles()) {
    const int k = static_cast<int>(cycle.size());
    for (int i = 1; 2 * i < k; ++i) first_set.emplace_back(cycle[i], cycle[k - i]);
    for (int i = 0; 2 * i <= k; ++i) {
      const int j = (1 - i + k) % k;
      if (i < j) second_set.emplace_back(cycle[i], cycle[j]);
    }
  }

  PassResult result;
  result.circuit.width_data = n;
  result.circuit.width_ancilla = 0;
  result.ancillae_used = 0;
  result.claimed_depth_bound = 6;
  result.notes = p.is_identity() ? "identity" : "two transposition sets";

  for (const auto* set : {&first_set, &second_set}) {
    if (set->empty()) continue;
    std::vector<Gate> l1, l2, l3;
    for (const auto& [a, b] : *set) {
      l1.push_back(CnotGate{a, b});
      l2.push_back(CnotGate{b, a});
      l3.push_back(CnotGate{a, b});
    }
    push_layer(result.circuit, std::move(l1));
    push_layer(result.circuit, std::move(l2));
    push_layer(result.circuit, std::move(l3));
  }
  return result;
}

PassResult fanout_parallelize(const Circuit& input) {
  require_no_ancillae(input, "fanout_parallelize");
  const int n = static_cast<int>(input.gates.size());

  PassResult result;
  result.circuit.width_data = input.width_data;
  result.circuit.global_phase = input.global_phase;
  if (n == 0) return result;

  int control = -1;
  std::set<int> targets;
  for (std::size_t i = 0; i < input.gates.size(); ++i) {
    int c, t;
    if (const auto* g = std::get_if<ControlledUGate>(&input.gates[i])) {
      c = g->control;
      t = g->target;
    } else if (const auto* x = std::get_if<CnotGate>(&input.gates[i])) {
      c = x->control;
      t = x->target;
    } else {
      throw PreconditionError("fanout_parallelize: gate " + std::to_string(i) +
                              " is not a controlled gate");
    }
    if (control == -1) control = c;
    if (c != control)
      throw PreconditionError("fanout_parallelize: gate " + std::to_string(i) +
                              " has control " + std::to_string(c) +
                              ", expected shared control " + std::to_string(control));
    if (t == control || !targets.insert(t).second)
      throw PreconditionError("fanout_parallelize: gate " + std::to_string(i) +
                              " target must be distinct from the control and "
                              "from other targets");
  }

  std::vector<int> copies;
  for (int i = 1; i < n; ++i) copies.push_back(input.width_data + i - 1);
  result.circuit.width_ancilla = n - 1;
  result.ancillae_used = n - 1;
  result.claimed_depth_bound = 2 * ceil_log2(n) + 1;

  const auto tree = copy_tree_layers(control, copies);
  for (const auto& layer : tree) push_layer(result.circuit, std::vector<Gate>(layer));

  std::vector<Gate> fire;
  for (int i = 0; i < n; ++i) {
    const int slot = i == 0 ? control : copies[i - 1];
    fire.push_back(replace_qubit(input.gates[i], control, slot));
  }
  push_layer(result.circuit, std::move(fire));
  append_reversed(result.circuit, tree);

  std::ostringstream notes;
  notes << n << " controlled gates fanned out from qubit " << control;
  result.notes = notes.str();
  return result;
}

namespace {

// Shared qubit of a family of two-qubit diagonal gates, plus each gate's
// partner. Throws when a gate is not two-qubit diagonal, no qubit is common
// to all gates, or partners repeat.
struct FaninShape {
  int shared;
  std::vector<int> partners;
};

FaninShape analyze_diag_fanin(const Circuit& input) {
  std::vector<std::vector<int>> supports;
  for (std::size_t i = 0; i < input.gates.size(); ++i) {
    const auto dv = as_diagonal(input.gates[i]);
    if (!dv || dv->qubits.size() != 2)
      throw PreconditionError("diag_fanin_parallelize: gate " + std::to_string(i) +
                              " is not a two-qubit diagonal gate");
    supports.push_back(dv->qubits);
  }
  std::set<int> common(supports[0].begin(), supports[0].end());
  for (const auto& s : supports) {
    std::set<int> next;
    for (int q : s)
      if (common.count(q)) next.insert(q);
    common = std::move(next);
  }
  if (common.empty())
    throw PreconditionError("diag_fanin_parallelize: gates do not share a qubit");

  FaninShape shape;
  shape.shared = *common.begin();
  std::set<int> seen;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const int other =
        supports[i][0] == shape.shared ? supports[i][1] : supports[i][0];
    if (!seen.insert(other).second)
      throw PreconditionError(
          "diag_fanin_parallelize: partner qubit " + std::to_string(other) +
          " repeats at gate " + std::to_string(i) + "; merge first");
    shape.partners.push_back(other);
  }
  return shape;
}

}  // namespace

PassResult diag_fanin_parallelize(const Circuit& input) {
  require_no_ancillae(input, "diag_fanin_parallelize");
  const int n = static_cast<int>(input.gates.size());

  PassResult result;
  result.circuit.width_data = input.width_data;
  result.circuit.global_phase = input.global_phase;
  if (n == 0) return result;

  const FaninShape shape = analyze_diag_fanin(input);
  if (n == 1) {
    result.claimed_depth_bound = 1;
    push_layer(result.circuit, {input.gates[0]});
    return result;
  }

  std::vector<int> copies;
  for (int i = 1; i < n; ++i) copies.push_back(input.width_data + i - 1);
  result.circuit.width_ancilla = n - 1;
  result.ancillae_used = n - 1;
  result.claimed_depth_bound = 2 * ceil_log2(n) + 1;

  const auto tree = copy_tree_layers(shape.shared, copies);
  for (const auto& layer : tree) push_layer(result.circuit, std::vector<Gate>(layer));

  // Diagonal gates see the same boolean value on every entangled copy, so all
  // of them can fire in one layer.
  std::vector<Gate> fire;
  for (int i = 0; i < n; ++i) {
    const int slot = i == 0 ? shape.shared : copies[i - 1];
    fire.push_back(replace_qubit(input.gates[i], shape.shared, slot));
  }
  push_layer(result.circuit, std::move(fire));
  append_reversed(result.circuit, tree);

  std::ostringstream notes;
  notes << n << " diagonal gates fanned in on qubit " << shape.shared;
  result.notes = notes.str();
  return result;
}

PassResult commuting_fanin_parallelize(const Circuit& input) {
  require_no_ancillae(input, "commuting_fanin_parallelize");
  const int n = static_cast<int>(input.gates.size());

  PassResult result;
  result.circuit.width_data = input.width_data;
  result.circuit.global_phase = input.global_phase;
  if (n == 0) return result;

  int target = -1;
  std::set<int> controls;
  std::vector<Mat2> us;
  for (std::size_t i = 0; i < input.gates.size(); ++i) {
    int c, t;
    Mat2 u;
    if (const auto* g = std::get_if<ControlledUGate>(&input.gates[i])) {
      c = g->control;
      t = g->target;
      u = g->u;
    } else if (const auto* x = std::get_if<CnotGate>(&input.gates[i])) {
      c = x->control;
      t = x->target;
      u = (Mat2() << 0, 1, 1, 0).finished();
    } else {
      throw PreconditionError("commuting_fanin_parallelize: gate " +
                              std::to_string(i) + " is not a controlled gate");
    }
    if (target == -1) target = t;
    if (t != target)
      throw PreconditionError("commuting_fanin_parallelize: gate " +
                              std::to_string(i) + " has target " + std::to_string(t) +
                              ", expected shared target " + std::to_string(target));
    if (c == target || !controls.insert(c).second)
      throw PreconditionError("commuting_fanin_parallelize: gate " +
                              std::to_string(i) +
                              " control must be distinct from the target and "
                              "from other controls");
    us.push_back(u);
  }

  const SimultaneousDiag sd = simultaneous_diagonalize(us);

  // In the shared eigenbasis every gate is a controlled phase, i.e. a
  // two-qubit diagonal gate, so the diagonal fan-in applies directly.
  Circuit middle;
  middle.width_data = input.width_data;
  for (int i = 0; i < n; ++i) {
    int control = -1;
    if (const auto* g = std::get_if<ControlledUGate>(&input.gates[i]))
      control = g->control;
    else
      control = std::get_if<CnotGate>(&input.gates[i])->control;
    middle.gates.push_back(DiagonalGate{
        {control, target},
        {0.0, 0.0, std::arg(sd.ds[i](0)), std::arg(sd.ds[i](1))}});
  }
  PassResult inner = diag_fanin_parallelize(middle);

  result.circuit.width_ancilla = inner.circuit.width_ancilla;
  result.ancillae_used = inner.ancillae_used;
  result.claimed_depth_bound = 2 * ceil_log2(n) + 3;

  push_layer(result.circuit, {OneQubitGate{target, sd.t.adjoint()}});
  for (auto& layer : inner.circuit.layers)
    result.circuit.layers.push_back(std::move(layer));
  push_layer(result.circuit, {OneQubitGate{target, sd.t}});

  std::ostringstream notes;
  notes << n << " commuting controlled gates conjugated into a shared eigenbasis";
  result.notes = notes.str();
  return result;
}

PassResult power_circuit(const ComplexMatrix& u, int control_bits) {
  if (control_bits < 1)
    throw PreconditionError("power_circuit: control register must have k >= 1");
  const Eigen::Index dim = u.rows();
  if (dim < 2 || (dim & (dim - 1)) != 0 || u.cols() != dim)
    throw PreconditionError("power_circuit: operator dimension must be a power of two");
  if (!is_unitary(u, 1e-8))
    throw PreconditionError("power_circuit: operator is not unitary");
  const int target_qubits = ceil_log2(static_cast<std::size_t>(dim));
  const int k = control_bits;

  PassResult result;
  result.circuit.width_data = k + target_qubits;

  if (target_qubits == 1) {
    const Eigensystem es = eig_unitary(u);
    const double d0 = std::arg(es.d(0));
    const double d1 = std::arg(es.d(1));
    const int target = k;

    // Control qubit j is worth 2^{k-1-j}, so the register reads as a binary
    // integer with qubit 0 as its most significant bit.
    Circuit middle;
    middle.width_data = k + 1;
    for (int j = 0; j < k; ++j) {
      const double weight = std::pow(2.0, k - 1 - j);
      if (d0 == 0.0 && d1 == 0.0) continue;
      middle.gates.push_back(
          DiagonalGate{{j, target}, {0.0, 0.0, d0 * weight, d1 * weight}});
    }

    const bool basis_change = max_abs(es.t - Mat2::Identity()) > 1e-12;
    PassResult inner = diag_fanin_parallelize(middle);
    result.circuit.width_ancilla = inner.circuit.width_ancilla;
    result.ancillae_used = inner.ancillae_used;
    result.claimed_depth_bound =
        (basis_change ? 2 : 0) +
        (middle.gates.empty() ? 0 : 2 * ceil_log2(middle.gates.size()) + 1);

    if (basis_change)
      push_layer(result.circuit, {OneQubitGate{target, Mat2(es.t.adjoint())}});
    for (auto& layer : inner.circuit.layers)
      result.circuit.layers.push_back(std::move(layer));
    if (basis_change) push_layer(result.circuit, {OneQubitGate{target, es.t}});
    result.notes = "single-qubit target; eigenbasis change " +
                   std::string(basis_change ? "applied" : "elided");
    return result;
  }

  // Multi-qubit targets are only supported when u is already diagonal: the
  // gate set has no primitive for a basis change on t > 1 qubits.
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (r != c && std::abs(u(r, c)) > 1e-12)
        throw PreconditionError(
            "power_circuit: multi-qubit operators must be diagonal (a basis "
            "change on several qubits is not expressible in the gate set)");

  std::vector<double> base_phases(dim);
  for (Eigen::Index x = 0; x < dim; ++x) base_phases[x] = std::arg(u(x, x));

  // One (1+t)-qubit diagonal gate per control bit; parallelized with copies
  // of the whole target register.
  std::vector<std::vector<double>> tables;
  std::vector<int> active_controls;
  for (int j = 0; j < k; ++j) {
    const double weight = std::pow(2.0, k - 1 - j);
    std::vector<double> phases(2 * dim, 0.0);
    bool nontrivial = false;
    for (Eigen::Index x = 0; x < dim; ++x) {
      phases[dim + x] = base_phases[x] * weight;
      if (phases[dim + x] != 0.0) nontrivial = true;
    }
    if (!nontrivial) continue;
    tables.push_back(std::move(phases));
    active_controls.push_back(j);
  }

  const int gates = static_cast<int>(tables.size());
  result.claimed_depth_bound = gates == 0 ? 0 : 2 * ceil_log2(gates) + 1;
  if (gates == 0) {
    result.notes = "diagonal multi-qubit target; identity elided";
    return result;
  }

  const int reg_base = k;
  std::vector<std::vector<int>> slots(gates);
  for (int q = 0; q < target_qubits; ++q) slots[0].push_back(reg_base + q);
  int next = k + target_qubits;
  for (int i = 1; i < gates; ++i)
    for (int q = 0; q < target_qubits; ++q) slots[i].push_back(next++);
  result.circuit.width_ancilla = (gates - 1) * target_qubits;
  result.ancillae_used = result.circuit.width_ancilla;

  std::vector<std::vector<Gate>> copy_layers;
  int made = 1;
  while (made < gates) {
    const int fresh = std::min(made, gates - made);
    std::vector<Gate> layer;
    for (int i = 0; i < fresh; ++i)
      for (int q = 0; q < target_qubits; ++q)
        layer.push_back(CnotGate{slots[i][q], slots[made + i][q]});
    made += fresh;
    copy_layers.push_back(std::move(layer));
  }
  for (const auto& layer : copy_layers)
    push_layer(result.circuit, std::vector<Gate>(layer));

  std::vector<Gate> fire;
  for (int i = 0; i < gates; ++i) {
    std::vector<int> qs{active_controls[i]};
    qs.insert(qs.end(), slots[i].begin(), slots[i].end());
    fire.push_back(DiagonalGate{std::move(qs), tables[i]});
  }
  push_layer(result.circuit, std::move(fire));
  append_reversed(result.circuit, copy_layers);

  result.notes = "diagonal multi-qubit target; register copied per control bit";
  return result;
}

PassResult diag_compress(const Circuit& input, bool log_depth) {
  require_no_ancillae(input, "diag_compress");

  // Merge phase tables per sorted qubit tuple.
  std::map<std::vector<int>, std::vector<double>> merged;
  for (std::size_t i = 0; i < input.gates.size(); ++i) {
    const auto dv = as_diagonal(input.gates[i]);
    if (!dv)
      throw PreconditionError("diag_compress: gate " + std::to_string(i) + " is " +
                              gate_kind_name(input.gates[i]) + ", not diagonal");
    const int kq = static_cast<int>(dv->qubits.size());
    std::vector<int> sorted = dv->qubits;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> pos(kq);  // position of dv->qubits[p] in the sorted tuple
    for (int p = 0; p < kq; ++p)
      pos[p] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(),
                                                 dv->qubits[p]) -
                                sorted.begin());
    auto& table = merged[sorted];
    if (table.empty()) table.assign(dv->phases.size(), 0.0);
    for (std::size_t s = 0; s < table.size(); ++s) {
      std::size_t orig = 0;
      for (int p = 0; p < kq; ++p) {
        const int bit = (s >> (kq - 1 - pos[p])) & 1;
        orig = (orig << 1) | bit;
      }
      table[s] += dv->phases[orig];
    }
  }

  std::vector<Gate> gates;
  std::map<int, int> multiplicity;
  std::size_t k_max = 1;
  for (auto& [tuple, table] : merged) {
    bool trivial = true;
    for (double p : table)
      if (phase_distance(p, 0.0) > 1e-15) trivial = false;
    if (trivial) continue;  // exact cancellations drop out
    for (int q : tuple) ++multiplicity[q];
    k_max = std::max(k_max, tuple.size());
    gates.push_back(DiagonalGate{tuple, table});
  }

  PassResult result;
  result.circuit.width_data = input.width_data;
  result.circuit.global_phase = input.global_phase;

  if (gates.empty()) {
    result.notes = "all phases cancelled";
    return result;
  }

  int max_mult = 0;
  for (const auto& [q, c] : multiplicity) max_mult = std::max(max_mult, c);

  if (!log_depth) {
    // Greedy maximal matching: each layer takes every remaining gate whose
    // tuple is disjoint from the ones already placed.
    std::vector<bool> placed(gates.size(), false);
    std::size_t remaining = gates.size();
    while (remaining > 0) {
      std::vector<Gate> layer;
      std::set<int> used;
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (placed[i]) continue;
        const auto support = gate_support(gates[i]);
        bool free = true;
        for (int q : support)
          if (used.count(q)) free = false;
        if (!free) continue;
        used.insert(support.begin(), support.end());
        layer.push_back(gates[i]);
        placed[i] = true;
        --remaining;
      }
      push_layer(result.circuit, std::move(layer));
    }
    result.claimed_depth_bound =
        std::min<long>(static_cast<long>(gates.size()),
                       static_cast<long>(k_max) * (max_mult - 1) + 1);
    std::ostringstream notes;
    notes << gates.size() << " merged tuples packed by greedy matching";
    result.notes = notes.str();
    return result;
  }

  // Log-depth variant: give every tuple occurrence of a qubit its own
  // entangled copy, then all merged gates fire in a single layer.
  int next = input.width_data;
  std::map<int, std::vector<int>> copies;
  for (const auto& [q, count] : multiplicity) {
    for (int i = 1; i < count; ++i) copies[q].push_back(next++);
  }
  result.circuit.width_ancilla = next - input.width_data;
  result.ancillae_used = result.circuit.width_ancilla;
  result.claimed_depth_bound = 2 * ceil_log2(max_mult) + 1;

  std::vector<std::vector<Gate>> copy_layers;
  {
    std::map<int, std::vector<std::vector<Gate>>> per_qubit;
    std::size_t deepest = 0;
    for (const auto& [q, list] : copies) {
      per_qubit[q] = copy_tree_layers(q, list);
      deepest = std::max(deepest, per_qubit[q].size());
    }
    copy_layers.resize(deepest);
    for (const auto& [q, layers] : per_qubit)
      for (std::size_t l = 0; l < layers.size(); ++l)
        copy_layers[l].insert(copy_layers[l].end(), layers[l].begin(),
                              layers[l].end());
  }
  for (const auto& layer : copy_layers)
    push_layer(result.circuit, std::vector<Gate>(layer));

  std::map<int, int> cursor;
  std::vector<Gate> fire;
  for (const Gate& g : gates) {
    Gate rewritten = g;
    auto* d = std::get_if<DiagonalGate>(&rewritten);
    for (int& q : d->qubits) {
      const int use = cursor[q]++;
      if (use > 0) q = copies[q][use - 1];
    }
    fire.push_back(std::move(rewritten));
  }
  push_layer(result.circuit, std::move(fire));
  append_reversed(result.circuit, copy_layers);

  std::ostringstream notes;
  notes << gates.size()
        << " merged tuples fired in one layer over per-qubit copy trees";
  result.notes = notes.str();
  return result;
}

namespace {

// Balanced partial-sum forest: for each row of `mat`, dedicated ancilla
// copies of the row's source wires and a binary tree of partial sums whose
// root holds the row's XOR. Rows with singleton support use their single
// copy as the root directly.
struct SumForest {
  std::vector<std::vector<Gate>> fanout_layers;
  std::vector<std::vector<Gate>> build_layers;
  std::vector<std::vector<Gate>> uncompute_node_layers;
  std::vector<std::vector<Gate>> uncompute_fanout_layers;
  std::vector<int> roots;  // per row
  int fanout_depth = 0;
  int tree_height = 0;
};

SumForest build_sum_forest(const Gf2Matrix& mat, const std::vector<int>& sources,
                           bool keep_roots, int& next_ancilla) {
  const int n = mat.dim();
  SumForest forest;
  forest.roots.assign(n, -1);

  // One leaf copy per (row, column) incidence, grouped by column.
  std::vector<std::vector<int>> col_copies(n);
  std::vector<std::vector<std::pair<int, int>>> row_leaves(n);  // (col, wire)
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      if (!mat.get(row, col)) continue;
      const int wire = next_ancilla++;
      col_copies[col].push_back(wire);
      row_leaves[row].emplace_back(col, wire);
    }
  }

  // Parallel doubling of every source onto its copies.
  std::set<int> surviving;  // copies that act as roots and must not die here
  {
    std::size_t deepest = 0;
    std::vector<std::vector<std::vector<Gate>>> per_col(n);
    for (int col = 0; col < n; ++col) {
      per_col[col] = copy_tree_layers(sources[col], col_copies[col]);
      deepest = std::max(deepest, per_col[col].size());
    }
    forest.fanout_layers.resize(deepest);
    forest.fanout_depth = static_cast<int>(deepest);
    for (int col = 0; col < n; ++col)
      for (std::size_t l = 0; l < per_col[col].size(); ++l)
        forest.fanout_layers[l].insert(forest.fanout_layers[l].end(),
                                       per_col[col][l].begin(),
                                       per_col[col][l].end());
  }

  // Per-row balanced trees; level ℓ is built by layers 2ℓ-2 (copy the left
  // child into the fresh node) and 2ℓ-1 (add the right child).
  struct Node {
    int wire, left, right, level;
  };
  std::vector<std::vector<Node>> nodes_by_level;
  for (int row = 0; row < n; ++row) {
    auto& leaves = row_leaves[row];
    if (leaves.empty()) continue;
    if (leaves.size() == 1) {
      forest.roots[row] = leaves[0].second;
      if (keep_roots) surviving.insert(leaves[0].second);
      continue;
    }
    std::vector<int> level_wires;
    for (const auto& [col, wire] : leaves) level_wires.push_back(wire);
    int level = 0;
    while (level_wires.size() > 1) {
      ++level;
      if (static_cast<std::size_t>(level) > nodes_by_level.size())
        nodes_by_level.resize(level);
      std::vector<int> next_wires;
      for (std::size_t i = 0; i + 1 < level_wires.size(); i += 2) {
        const int node = next_ancilla++;
        nodes_by_level[level - 1].push_back(
            {node, level_wires[i], level_wires[i + 1], level});
        next_wires.push_back(node);
      }
      if (level_wires.size() % 2 == 1) next_wires.push_back(level_wires.back());
      level_wires = std::move(next_wires);
    }
    forest.roots[row] = level_wires[0];
  }

  forest.tree_height = static_cast<int>(nodes_by_level.size());
  forest.build_layers.resize(2 * forest.tree_height);
  for (int l = 0; l < forest.tree_height; ++l) {
    for (const Node& node : nodes_by_level[l]) {
      forest.build_layers[2 * l].push_back(CnotGate{node.left, node.wire});
      forest.build_layers[2 * l + 1].push_back(CnotGate{node.right, node.wire});
    }
  }

  // Interior nodes (and the roots too, unless kept) are cancelled top-down so
  // every child still holds its value when its parent is reversed.
  std::set<int> kept_roots;
  if (keep_roots)
    for (int r : forest.roots)
      if (r >= 0) kept_roots.insert(r);
  for (int l = forest.tree_height - 1; l >= 0; --l) {
    std::vector<Gate> un_add, un_copy;
    for (const Node& node : nodes_by_level[l]) {
      if (kept_roots.count(node.wire)) continue;
      un_add.push_back(CnotGate{node.right, node.wire});
      un_copy.push_back(CnotGate{node.left, node.wire});
    }
    if (!un_add.empty()) {
      forest.uncompute_node_layers.push_back(std::move(un_add));
      forest.uncompute_node_layers.push_back(std::move(un_copy));
    }
  }

  for (auto it = forest.fanout_layers.rbegin(); it != forest.fanout_layers.rend();
       ++it) {
    std::vector<Gate> layer;
    for (const Gate& g : *it) {
      const auto* x = std::get_if<CnotGate>(&g);
      if (!surviving.count(x->target)) layer.push_back(g);
    }
    forest.uncompute_fanout_layers.push_back(std::move(layer));
  }
  return forest;
}

void emit(LayeredCircuit& c, const std::vector<std::vector<Gate>>& layers) {
  for (const auto& layer : layers)
    if (!layer.empty()) c.layers.push_back(layer);
}

}  // namespace

PassResult cnot_parallelize(const Circuit& input) {
  require_no_ancillae(input, "cnot_parallelize");
  const int n = input.width_data;
  const Gf2Matrix m = gf2_simulate(input);

  PassResult result;
  result.circuit.width_data = n;
  if (m.is_identity()) {
    result.notes = "map is the identity";
    return result;
  }
  const Gf2Matrix m_inv = gf2_invert(m);

  int next_ancilla = n;
  std::vector<int> data_wires(n);
  for (int i = 0; i < n; ++i) data_wires[i] = i;

  // Stage 1: partial-sum forest for M; roots end up holding Mq.
  SumForest out_forest = build_sum_forest(m, data_wires, true, next_ancilla);
  emit(result.circuit, out_forest.fanout_layers);
  emit(result.circuit, out_forest.build_layers);
  emit(result.circuit, out_forest.uncompute_node_layers);
  emit(result.circuit, out_forest.uncompute_fanout_layers);

  // Stage 2: rebuild q = M⁻¹(Mq) from the output roots and cancel the data
  // wires, then unwind everything.
  SumForest in_forest =
      build_sum_forest(m_inv, out_forest.roots, false, next_ancilla);
  emit(result.circuit, in_forest.fanout_layers);
  emit(result.circuit, in_forest.build_layers);
  std::vector<Gate> cancel;
  for (int j = 0; j < n; ++j) cancel.push_back(CnotGate{in_forest.roots[j], j});
  result.circuit.layers.push_back(std::move(cancel));
  emit(result.circuit, in_forest.uncompute_node_layers);
  emit(result.circuit, in_forest.uncompute_fanout_layers);

  // Stage 3: the data wires are now zero; shift Mq onto them and clear the
  // output roots.
  std::vector<Gate> shift, clear;
  for (int i = 0; i < n; ++i) {
    shift.push_back(CnotGate{out_forest.roots[i], i});
    clear.push_back(CnotGate{i, out_forest.roots[i]});
  }
  result.circuit.layers.push_back(std::move(shift));
  result.circuit.layers.push_back(std::move(clear));

  result.circuit.width_ancilla = next_ancilla - n;
  result.ancillae_used = next_ancilla - n;

  const int f1 = out_forest.fanout_depth;
  const int h1 = out_forest.tree_height;
  const int f2 = in_forest.fanout_depth;
  const int h2 = in_forest.tree_height;
  result.claimed_depth_bound = 2 * f1 + 2 * h1 + 2 * std::max(h1 - 1, 0) +
                               2 * f2 + 4 * h2 + 3;

  std::ostringstream notes;
  notes << "fanout depths " << f1 << "/" << f2 << ", tree heights " << h1 << "/"
        << h2 << ", " << result.ancillae_used << " ancillae";
  result.notes = notes.str();
  return result;
}

PassResult morse_synthesize(const PhaseVector& pv) {
  if (pv.n < 1 || pv.n > MORSE_MAX_N)
    throw PreconditionError("morse_synthesize: n must be in [1, " +
                            std::to_string(MORSE_MAX_N) + "]");
  if (pv.omega.size() != (std::size_t{1} << pv.n))
    throw PreconditionError("morse_synthesize: phase vector has wrong length");

  const SubsetCoefficients sc = walsh_coefficients(pv);

  PassResult result;
  result.circuit.width_data = pv.n;
  result.circuit.global_phase = sc.theta[0];

  int blocks = 0;
  for (std::uint64_t s = 1; s < sc.theta.size(); ++s) {
    const double theta = sc.theta[s];
    if (std::abs(theta) <= PRUNE_EPS) continue;
    ++blocks;

    std::vector<int> qubits;
    for (int q = 0; q < pv.n; ++q)
      if ((s >> (pv.n - 1 - q)) & 1) qubits.push_back(q);

    // Parity of the subset is folded onto its lowest qubit by a balanced
    // in-place CNOT tree; the inverse tree restores every wire.
    std::vector<std::vector<Gate>> tree;
    std::vector<int> surv = qubits;
    while (surv.size() > 1) {
      const std::size_t keep = (surv.size() + 1) / 2;
      std::vector<Gate> layer;
      for (std::size_t i = 0; keep + i < surv.size(); ++i)
        layer.push_back(CnotGate{surv[keep + i], surv[i]});
      surv.resize(keep);
      tree.push_back(std::move(layer));
    }
    for (const auto& layer : tree)
      result.circuit.layers.push_back(layer);

    Mat2 phase_gate = Mat2::Zero();
    phase_gate(0, 0) = std::polar(1.0, theta);
    phase_gate(1, 1) = std::polar(1.0, -theta);
    result.circuit.layers.push_back({OneQubitGate{qubits[0], phase_gate}});

    append_reversed(result.circuit, tree);
    result.claimed_depth_bound += 2 * static_cast<long>(tree.size()) + 1;
  }

  std::ostringstream notes;
  notes << blocks << " parity-basis blocks";
  result.notes = notes.str();
  return result;
}

}  // namespace qpar
