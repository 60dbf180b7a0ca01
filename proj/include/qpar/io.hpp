#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qpar/circuit.hpp"

namespace qpar {

/// Circuit interchange document, format_version "1". Exactly one of `flat`
/// (ordered gate list) and `layered` is present, matching whether the file
/// carried "gates" or "layers". Unknown fields are rejected.
struct CircuitDocument {
  std::optional<Circuit> flat;
  std::optional<LayeredCircuit> layered;

  /// The circuit as a flat gate list (layered documents are flattened).
  Circuit as_circuit() const;
};

nlohmann::json gate_to_json(const Gate& g);
Gate gate_from_json(const nlohmann::json& j);

nlohmann::json circuit_to_json(const Circuit& c);
nlohmann::json circuit_to_json(const LayeredCircuit& c);

/// Parses and validates; throws ParseError on malformed documents or circuits
/// that fail validate().
CircuitDocument parse_circuit_document(const nlohmann::json& j);

CircuitDocument load_circuit_file(const std::filesystem::path& path);
void save_circuit_file(const std::filesystem::path& path, const Circuit& c);
void save_circuit_file(const std::filesystem::path& path, const LayeredCircuit& c);

}  // namespace qpar
