#pragma once

#include <cstddef>
#include <string>

#include "crgen/protocols.hpp"

namespace crgen {

enum class StrategyModel { free, classical, quantum };

std::string strategy_model_name(StrategyModel model);

/// One strategy file in memory; `model` selects which member is meaningful.
struct StrategyFile {
  StrategyModel model = StrategyModel::free;
  std::size_t n = 0;
  std::size_t t = 0;
  Povm alice;  // free
  Povm bob;    // free
  ClassicalStrategy classical;
  QuantumStrategy quantum;
};

StrategyFile make_free_strategy(Povm alice, Povm bob, std::size_t n);

/// JSON round trip. Hermitian operators are stored as their lower triangle
/// ("dim" + flat [re, im, ...] pairs, rows i >= j in row-major order);
/// Kraus operators are dense ("rows", "cols", row-major [re, im, ...]).
/// Malformed documents throw std::invalid_argument naming the first
/// violated field; the strategy itself is validated on load.
std::string strategy_to_json(const StrategyFile& s);
StrategyFile parse_strategy(const std::string& json_text);

/// File variants. Unreadable or unwritable paths throw
/// std::ios_base::failure.
void save_strategy(const StrategyFile& s, const std::string& path);
StrategyFile load_strategy(const std::string& path);

struct ProtocolReport {
  std::string model;
  std::size_t n = 0;
  std::size_t t = 0;
  double success = 0.0;
  double min_entropy = 0.0;
  /// Context figure: for free strategies the largest admissible success
  /// probability at the measured min-entropy; for classical / quantum
  /// strategies the communication lower bound implied by the measured
  /// success and min-entropy (0 when min-entropy < 1).
  double bound = 0.0;
};

ProtocolReport evaluate_strategy(const StrategyFile& s, double rho);

}  // namespace crgen
