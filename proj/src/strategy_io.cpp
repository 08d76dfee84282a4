#include "crgen/strategy_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "crgen/bounds.hpp"

namespace crgen {

namespace {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  const std::size_t d = m.dim();
  json tri = json::array();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      tri.push_back(std::real(m(i, j)));
      tri.push_back(std::imag(m(i, j)));
    }
  return json{{"dim", d}, {"lower", std::move(tri)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("lower"))
    throw std::invalid_argument(where + ": expected an object with 'dim' and 'lower'");
  const std::size_t d = j.at("dim").get<std::size_t>();
  if (d == 0 || d > 64) throw std::invalid_argument(where + ": dim out of range");
  const auto& tri = j.at("lower");
  if (!tri.is_array() || tri.size() != d * (d + 1))
    throw std::invalid_argument(where + ": 'lower' must hold dim*(dim+1) numbers");
  ComplexMatrix m(d, d);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j2 = 0; j2 <= i; ++j2) {
      const double re = tri.at(pos++).get<double>();
      const double im = tri.at(pos++).get<double>();
      m(i, j2) = Complex(re, im);
      if (j2 != i) m(j2, i) = Complex(re, -im);
    }
  return m;
}

json kraus_to_json(const ComplexMatrix& k) {
  json entries = json::array();
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) {
      entries.push_back(std::real(k(i, j)));
      entries.push_back(std::imag(k(i, j)));
    }
  return json{{"rows", k.rows()}, {"cols", k.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix kraus_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw std::invalid_argument(where + ": expected 'rows', 'cols' and 'entries'");
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  if (rows == 0 || cols == 0 || rows > 64 || cols > 64)
    throw std::invalid_argument(where + ": shape out of range");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != 2 * rows * cols)
    throw std::invalid_argument(where + ": 'entries' must hold 2*rows*cols numbers");
  ComplexMatrix m(rows, cols);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j2 = 0; j2 < cols; ++j2) {
      const double re = entries.at(pos++).get<double>();
      const double im = entries.at(pos++).get<double>();
      m(i, j2) = Complex(re, im);
    }
  return m;
}

json povm_to_json(const Povm& p) {
  json out = json::object();
  for (const auto& [label, m] : p.elements) out[label] = matrix_to_json(m);
  return out;
}

Povm povm_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || j.empty())
    throw std::invalid_argument(where + ": expected a nonempty label -> matrix object");
  Povm p;
  for (const auto& [label, jm] : j.items())
    p.elements[label] = matrix_from_json(jm, where + "['" + label + "']");
  return p;
}

std::size_t read_size(const json& j, const char* field) {
  if (!j.contains(field)) throw std::invalid_argument(std::string("strategy: missing '") + field + "'");
  if (!j.at(field).is_number_unsigned())
    throw std::invalid_argument(std::string("strategy: '") + field + "' must be a nonnegative integer");
  return j.at(field).get<std::size_t>();
}

}  // namespace

std::string strategy_model_name(StrategyModel model) {
  switch (model) {
    case StrategyModel::free: return "free";
    case StrategyModel::classical: return "classical";
    case StrategyModel::quantum: return "quantum";
  }
  throw std::logic_error("strategy_model_name: unknown model");
}

StrategyFile make_free_strategy(Povm alice, Povm bob, std::size_t n) {
  StrategyFile s;
  s.model = StrategyModel::free;
  s.n = n;
  s.t = 0;
  s.alice = std::move(alice);
  s.bob = std::move(bob);
  return s;
}

std::string strategy_to_json(const StrategyFile& s) {
  json j;
  j["model"] = strategy_model_name(s.model);
  switch (s.model) {
    case StrategyModel::free:
      j["n"] = s.n;
      j["alice"] = povm_to_json(s.alice);
      j["bob"] = povm_to_json(s.bob);
      break;
    case StrategyModel::classical: {
      j["n"] = s.classical.n;
      j["t"] = s.classical.t;
      json alice = json::object();
      for (const auto& [pi, branch] : s.classical.alice) {
        json jb = json::object();
        for (const auto& [a, m] : branch) jb[a] = matrix_to_json(m);
        alice[pi] = std::move(jb);
      }
      j["alice"] = std::move(alice);
      json bob = json::object();
      for (const auto& [pi, povm] : s.classical.bob) bob[pi] = povm_to_json(povm);
      j["bob"] = std::move(bob);
      break;
    }
    case StrategyModel::quantum: {
      j["n"] = s.quantum.n;
      j["t"] = s.quantum.t;
      json subs = json::object();
      for (const auto& [a, c] : s.quantum.subchannels) {
        json ops = json::array();
        for (const auto& k : c.kraus) ops.push_back(kraus_to_json(k));
        subs[a] = std::move(ops);
      }
      j["subchannels"] = std::move(subs);
      j["bob"] = povm_to_json(s.quantum.bob);
      break;
    }
  }
  return j.dump(2) + "\n";
}

StrategyFile parse_strategy(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("strategy: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("model") || !j.at("model").is_string())
    throw std::invalid_argument("strategy: missing string field 'model'");
  const std::string model = j.at("model").get<std::string>();

  StrategyFile s;
  if (model == "free") {
    s.model = StrategyModel::free;
    s.n = read_size(j, "n");
    if (!j.contains("alice") || !j.contains("bob"))
      throw std::invalid_argument("strategy: free model needs 'alice' and 'bob'");
    s.alice = povm_from_json(j.at("alice"), "alice");
    s.bob = povm_from_json(j.at("bob"), "bob");
    s.alice.validate();
    s.bob.validate();
  } else if (model == "classical") {
    s.model = StrategyModel::classical;
    s.classical.n = read_size(j, "n");
    s.classical.t = read_size(j, "t");
    s.n = s.classical.n;
    s.t = s.classical.t;
    if (!j.contains("alice") || !j.at("alice").is_object() || j.at("alice").empty())
      throw std::invalid_argument("strategy: classical model needs a nonempty 'alice' object");
    for (const auto& [pi, jb] : j.at("alice").items()) {
      if (!jb.is_object() || jb.empty())
        throw std::invalid_argument("strategy: alice['" + pi + "'] must be a nonempty object");
      for (const auto& [a, jm] : jb.items())
        s.classical.alice[pi][a] = matrix_from_json(jm, "alice['" + pi + "']['" + a + "']");
    }
    if (!j.contains("bob") || !j.at("bob").is_object())
      throw std::invalid_argument("strategy: classical model needs a 'bob' object");
    for (const auto& [pi, jp] : j.at("bob").items())
      s.classical.bob[pi] = povm_from_json(jp, "bob['" + pi + "']");
    s.classical.validate();
  } else if (model == "quantum") {
    s.model = StrategyModel::quantum;
    s.quantum.n = read_size(j, "n");
    s.quantum.t = read_size(j, "t");
    s.n = s.quantum.n;
    s.t = s.quantum.t;
    if (!j.contains("subchannels") || !j.at("subchannels").is_object() ||
        j.at("subchannels").empty())
      throw std::invalid_argument("strategy: quantum model needs a nonempty 'subchannels' object");
    for (const auto& [a, jops] : j.at("subchannels").items()) {
      if (!jops.is_array() || jops.empty())
        throw std::invalid_argument("strategy: subchannels['" + a +
                                    "'] must be a nonempty array of Kraus operators");
      std::vector<ComplexMatrix> ops;
      for (std::size_t i = 0; i < jops.size(); ++i)
        ops.push_back(kraus_from_json(jops.at(i), "subchannels['" + a + "']"));
      s.quantum.subchannels[a] = QuantumChannel::from_kraus(std::move(ops));
    }
    if (!j.contains("bob"))
      throw std::invalid_argument("strategy: quantum model needs a 'bob' object");
    s.quantum.bob = povm_from_json(j.at("bob"), "bob");
    s.quantum.validate();
  } else {
    throw std::invalid_argument("strategy: unknown model '" + model + "'");
  }
  return s;
}

void save_strategy(const StrategyFile& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << strategy_to_json(s);
  out.flush();
  if (!out) throw std::ios_base::failure("failed while writing '" + path + "'");
}

StrategyFile load_strategy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("failed while reading '" + path + "'");
  return parse_strategy(buf.str());
}

ProtocolReport evaluate_strategy(const StrategyFile& s, double rho) {
  ProtocolReport r;
  r.model = strategy_model_name(s.model);
  switch (s.model) {
    case StrategyModel::free:
      r.n = s.n;
      r.t = 0;
      r.success = success_free(s.alice, s.bob, rho, s.n);
      r.min_entropy = std::min(output_min_entropy(s.alice), output_min_entropy(s.bob));
      r.bound = bound_free(rho, r.min_entropy);
      break;
    case StrategyModel::classical: {
      r.n = s.classical.n;
      r.t = s.classical.t;
      r.success = success_classical(s.classical, rho);
      r.min_entropy = output_min_entropy(s.classical);
      break;
    }
    case StrategyModel::quantum: {
      r.n = s.quantum.n;
      r.t = s.quantum.t;
      r.success = success_quantum(s.quantum, rho);
      r.min_entropy = output_min_entropy(s.quantum);
      break;
    }
  }
  if (s.model != StrategyModel::free) {
    // Communication implied by the measured operating point: success
    // 2^{-gamma k} at min-entropy k, fed back through the matching bound.
    const double k = r.min_entropy;
    if (k < 1.0) {
      r.bound = 0.0;
    } else {
      double gamma = r.success >= 1.0 ? 0.0 : -std::log2(std::max(r.success, 1e-300)) / k;
      gamma = std::min(std::max(gamma, 1e-12), 1.0 - 1e-12);
      r.bound = s.model == StrategyModel::classical ? bound_classical_lb(rho, gamma, k)
                                                    : bound_quantum_lb(rho, gamma, k);
    }
  }
  return r;
}

}  // namespace crgen
