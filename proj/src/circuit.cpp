#include "qpar/circuit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpar/constants.hpp"
#include "qpar/error.hpp"

namespace qpar {

std::size_t LayeredCircuit::gate_count() const {
  std::size_t total = 0;
  for (const auto& layer : layers) total += layer.size();
  return total;
}

bool Permutation::is_valid() const {
  const int n = size();
  std::vector<bool> seen(n, false);
  for (int img : images) {
    if (img < 0 || img >= n || seen[img]) return false;
    seen[img] = true;
  }
  return n >= 1;
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (images[i] != i) return false;
  return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(images.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[start] || images[start] == start) continue;
    std::vector<int> cycle;
    int cur = start;
    while (!seen[cur]) {
      seen[cur] = true;
      cycle.push_back(cur);
      cur = images[cur];
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

namespace {

bool matrix_is_unitary(const Mat2& u) {
  Mat2 r = u.adjoint() * u - Mat2::Identity();
  return r.cwiseAbs().maxCoeff() <= EPS_UNITARY;
}

void check_gate(const Gate& g, int gate_index, int width,
                std::vector<Violation>& out) {
  const auto support = gate_support(g);
  std::set<int> distinct;
  for (int q : support) {
    if (q < 0 || q >= width) {
      std::ostringstream msg;
      msg << "qubit index " << q << " out of range [0, " << width << ") at gate "
          << gate_index;
      out.push_back({gate_index, msg.str()});
    }
    if (!distinct.insert(q).second) {
      std::ostringstream msg;
      msg << "duplicate qubit index " << q << " at gate " << gate_index;
      out.push_back({gate_index, msg.str()});
    }
  }
  if (const auto* o = std::get_if<OneQubitGate>(&g)) {
    if (!matrix_is_unitary(o->u))
      out.push_back({gate_index, "non-unitary at gate " + std::to_string(gate_index)});
  } else if (const auto* c = std::get_if<ControlledUGate>(&g)) {
    if (!matrix_is_unitary(c->u))
      out.push_back({gate_index, "non-unitary at gate " + std::to_string(gate_index)});
  } else if (const auto* d = std::get_if<DiagonalGate>(&g)) {
    const std::size_t k = d->qubits.size();
    if (k < 1) {
      out.push_back({gate_index, "diagonal gate with no qubits at gate " +
                                     std::to_string(gate_index)});
    } else if (k >= 63 || d->phases.size() != (std::size_t{1} << k)) {
      std::ostringstream msg;
      msg << "diagonal gate phase table has " << d->phases.size()
          << " entries, expected 2^" << k << " at gate " << gate_index;
      out.push_back({gate_index, msg.str()});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Circuit& c) {
  std::vector<Violation> out;
  if (c.width_data < 1)
    out.push_back({-1, "width_data must be at least 1"});
  if (c.width_ancilla < 0)
    out.push_back({-1, "width_ancilla must be non-negative"});
  const int width = c.width_total();
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    check_gate(c.gates[i], static_cast<int>(i), width, out);
  return out;
}

std::vector<Violation> validate(const LayeredCircuit& c) {
  std::vector<Violation> out = validate(flatten(c));
  int gate_index = 0;
  for (std::size_t l = 0; l < c.layers.size(); ++l) {
    std::set<int> used;
    for (const Gate& g : c.layers[l]) {
      for (int q : gate_support(g)) {
        if (!used.insert(q).second) {
          std::ostringstream msg;
          msg << "layer " << l << " touches qubit " << q
              << " more than once (gate " << gate_index << ")";
          out.push_back({gate_index, msg.str()});
        }
      }
      ++gate_index;
    }
  }
  return out;
}

Circuit flatten(const LayeredCircuit& c) {
  Circuit out;
  out.width_data = c.width_data;
  out.width_ancilla = c.width_ancilla;
  out.global_phase = c.global_phase;
  for (const auto& layer : c.layers)
    out.gates.insert(out.gates.end(), layer.begin(), layer.end());
  return out;
}

LayeredCircuit schedule_greedy(const Circuit& c) {
  const auto violations = validate(c);
  if (!violations.empty())
    throw PreconditionError("schedule_greedy: invalid circuit: " +
                            violations.front().message);

  LayeredCircuit out;
  out.width_data = c.width_data;
  out.width_ancilla = c.width_ancilla;
  out.global_phase = c.global_phase;

  // last_layer[q] = index of the latest layer containing a gate on qubit q
  std::vector<int> last_layer(c.width_total(), -1);
  for (const Gate& g : c.gates) {
    int layer = 0;
    const auto support = gate_support(g);
    for (int q : support) layer = std::max(layer, last_layer[q] + 1);
    if (layer == static_cast<int>(out.layers.size())) out.layers.emplace_back();
    out.layers[layer].push_back(g);
    for (int q : support) last_layer[q] = layer;
  }
  return out;
}

int depth(const LayeredCircuit& c) { return static_cast<int>(c.layers.size()); }

}  // namespace qpar
