#include "qpar/gate.hpp"

#include <cmath>

namespace qpar {

std::vector<int> gate_support(const Gate& g) {
  struct Visitor {
    std::vector<int> operator()(const OneQubitGate& x) const { return {x.qubit}; }
    std::vector<int> operator()(const ControlledUGate& x) const {
      return {x.control, x.target};
    }
    std::vector<int> operator()(const CnotGate& x) const {
      return {x.control, x.target};
    }
    std::vector<int> operator()(const SymmetricPhaseGate& x) const {
      return {x.q1, x.q2};
    }
    std::vector<int> operator()(const DiagonalGate& x) const { return x.qubits; }
  };
  return std::visit(Visitor{}, g);
}

namespace {

bool is_diag2(const Mat2& u, double tol) {
  return std::abs(u(0, 1)) <= tol && std::abs(u(1, 0)) <= tol;
}

}  // namespace

std::optional<DiagonalView> as_diagonal(const Gate& g, double tol) {
  if (const auto* d = std::get_if<DiagonalGate>(&g)) {
    return DiagonalView{d->qubits, d->phases};
  }
  if (const auto* s = std::get_if<SymmetricPhaseGate>(&g)) {
    return DiagonalView{{s->q1, s->q2}, {0.0, 0.0, 0.0, s->theta}};
  }
  if (const auto* o = std::get_if<OneQubitGate>(&g)) {
    if (!is_diag2(o->u, tol)) return std::nullopt;
    return DiagonalView{{o->qubit}, {std::arg(o->u(0, 0)), std::arg(o->u(1, 1))}};
  }
  if (const auto* c = std::get_if<ControlledUGate>(&g)) {
    if (!is_diag2(c->u, tol)) return std::nullopt;
    return DiagonalView{{c->control, c->target},
                        {0.0, 0.0, std::arg(c->u(0, 0)), std::arg(c->u(1, 1))}};
  }
  return std::nullopt;  // CNOT is never diagonal
}

const char* gate_kind_name(const Gate& g) {
  struct Visitor {
    const char* operator()(const OneQubitGate&) const { return "one_qubit"; }
    const char* operator()(const ControlledUGate&) const { return "controlled_u"; }
    const char* operator()(const CnotGate&) const { return "cnot"; }
    const char* operator()(const SymmetricPhaseGate&) const { return "symmetric_phase"; }
    const char* operator()(const DiagonalGate&) const { return "diagonal"; }
  };
  return std::visit(Visitor{}, g);
}

}  // namespace qpar
