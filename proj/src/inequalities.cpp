#include "crgen/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crgen {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

ComplexMatrix ginibre(std::size_t dim, Prng& rng) {
  ComplexMatrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      g(i, j) = Complex(re, im) * (1.0 / std::sqrt(2.0));
    }
  return g;
}

// Pseudo-inverse square root of a PSD matrix; eigenvalues below the cutoff
// are treated as exact zeros.
ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m) {
  auto eig = hermitian_eig(m);
  const std::size_t d = eig.eigenvalues.size();
  const double cutoff = 1e-12 * std::max(1.0, eig.eigenvalues.back());
  ComplexMatrix out(d, d);
  const ComplexMatrix& v = eig.eigenvectors;
  for (std::size_t k = 0; k < d; ++k) {
    if (eig.eigenvalues[k] <= cutoff) continue;
    const double w = 1.0 / std::sqrt(eig.eigenvalues[k]);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) += w * v(i, k) * std::conj(v(j, k));
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

double Prng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

std::string ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::ginibre: return "ginibre";
    case EnsembleKind::hermitian: return "hermitian";
    case EnsembleKind::psd: return "psd";
    case EnsembleKind::density: return "density";
    case EnsembleKind::povm_element: return "povm_element";
  }
  throw std::logic_error("ensemble_kind_name: unknown kind");
}

std::vector<ComplexMatrix> sample(const RandomEnsemble& ensemble, std::size_t count) {
  if (ensemble.dim == 0) throw std::invalid_argument("sample: dim must be >= 1");
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  Prng rng(ensemble.seed);
  std::vector<ComplexMatrix> out;
  out.reserve(count);

  if (ensemble.kind == EnsembleKind::povm_element) {
    // Joint draw: S_i = G_i† G_i, then E_i = T^{-1/2} S_i T^{-1/2} with
    // T = sum S_i, which sums to the identity on the support of T.
    std::vector<ComplexMatrix> s;
    ComplexMatrix total(ensemble.dim, ensemble.dim);
    for (std::size_t i = 0; i < count; ++i) {
      const ComplexMatrix g = ginibre(ensemble.dim, rng);
      s.push_back(g.dagger() * g);
      total += s.back();
    }
    const ComplexMatrix t_inv_sqrt = psd_inv_sqrt(total);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(require_hermitian(t_inv_sqrt * s[i] * t_inv_sqrt));
    return out;
  }

  for (std::size_t i = 0; i < count; ++i) {
    const ComplexMatrix g = ginibre(ensemble.dim, rng);
    switch (ensemble.kind) {
      case EnsembleKind::ginibre:
        out.push_back(g);
        break;
      case EnsembleKind::hermitian:
        out.push_back((g + g.dagger()) * 0.5);
        break;
      case EnsembleKind::psd:
        out.push_back(g.dagger() * g);
        break;
      case EnsembleKind::density: {
        ComplexMatrix p = g.dagger() * g;
        out.push_back(p * (1.0 / std::real(p.trace())));
        break;
      }
      case EnsembleKind::povm_element:
        break;  // handled above
    }
  }
  return out;
}

QuantumChannel random_trace_preserving_channel(std::size_t in_dim, std::size_t out_dim,
                                               std::size_t n_kraus, Prng& rng) {
  if (in_dim == 0 || out_dim == 0 || n_kraus == 0)
    throw std::invalid_argument("random_trace_preserving_channel: dimensions must be >= 1");
  const std::size_t rows = out_dim * n_kraus;
  if (rows < in_dim)
    throw std::invalid_argument(
        "random_trace_preserving_channel: n_kraus * out_dim must cover in_dim");

  // Stacked Kraus block = isometry: modified Gram-Schmidt with a second pass.
  ComplexMatrix m(rows, in_dim);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < in_dim; ++j)
      m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  for (std::size_t c = 0; c < in_dim; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += std::conj(m(i, prev)) * m(i, c);
        for (std::size_t i = 0; i < rows; ++i) m(i, c) -= dot * m(i, prev);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += std::norm(m(i, c));
    norm = std::sqrt(norm);
    if (norm < 1e-12)
      throw std::runtime_error("random_trace_preserving_channel: degenerate random draw");
    for (std::size_t i = 0; i < rows; ++i) m(i, c) *= 1.0 / norm;
  }

  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < n_kraus; ++k) {
    ComplexMatrix block(out_dim, in_dim);
    for (std::size_t i = 0; i < out_dim; ++i)
      for (std::size_t j = 0; j < in_dim; ++j) block(i, j) = m(k * out_dim + i, j);
    kraus.push_back(block);
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

std::string CheckParams::to_string() const {
  std::string s;
  s += "p=" + format_double(p);
  s += ";q=" + format_double(q);
  s += ";rho=" + format_double(rho);
  s += ";n=" + std::to_string(n);
  s += ";m=" + std::to_string(m);
  s += ";seed=" + std::to_string(seed);
  s += ";index=" + std::to_string(index);
  s += ";kind=" + kind;
  return s;
}

SlackReport check_hypercontractivity(const ComplexMatrix& a, double rho, double p, double q,
                                     int n, int m) {
  if (!(p >= 1.0) || !(q >= p)) throw std::domain_error("check_hypercontractivity: need 1 <= p <= q");
  if (n < 1 || m < 0) throw std::invalid_argument("check_hypercontractivity: need n >= 1, m >= 0");
  const double rho_max = (p == q) ? 1.0 : std::sqrt((p - 1.0) / (q - 1.0));
  if (!(rho >= 0.0) || rho > rho_max + 1e-12)
    throw std::invalid_argument("check_hypercontractivity: rho exceeds sqrt((p-1)/(q-1))");
  const std::size_t dim = std::size_t{1} << (n + m);
  if (a.dim() != dim)
    throw std::invalid_argument("check_hypercontractivity: matrix dimension is not 2^(n+m)");
  const ComplexMatrix ah = require_hermitian(a);

  std::vector<std::size_t> qubits(n);
  for (int f = 0; f < n; ++f) qubits[f] = static_cast<std::size_t>(f);
  const ComplexMatrix moved = depolarize(ah, std::min(rho, 1.0), qubits, n + m);

  SlackReport r;
  r.lhs = std::pow(2.0, -n / q) * schatten_norm(moved, q);
  r.rhs = std::pow(2.0, -n / p) * schatten_norm(ah, p);
  r.slack = r.rhs - r.lhs;
  r.params.p = p;
  r.params.q = q;
  r.params.rho = rho;
  r.params.n = n;
  r.params.m = m;
  return r;
}

SlackReport check_holder_sequences(const std::vector<ComplexMatrix>& as,
                                   const std::vector<ComplexMatrix>& bs, double q) {
  if (!(q > 1.0) || std::isinf(q))
    throw std::domain_error("check_holder_sequences: q must be finite and > 1");
  if (as.empty() || as.size() != bs.size())
    throw std::invalid_argument("check_holder_sequences: sequences must be nonempty, same length");
  const double p = q / (q - 1.0);

  Complex lhs_sum = 0.0;
  double a_power = 0.0, b_power = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    lhs_sum += (as[i] * bs[i]).trace();
    // |M|^r = (M†M)^{r/2}; trace of a PSD matrix is real.
    a_power += std::real(psd_power(as[i].dagger() * as[i], p / 2.0).trace());
    b_power += std::real(psd_power(bs[i].dagger() * bs[i], q / 2.0).trace());
  }

  SlackReport r;
  r.lhs = std::abs(lhs_sum);
  r.rhs = std::pow(a_power, 1.0 / p) * std::pow(b_power, 1.0 / q);
  r.slack = r.rhs - r.lhs;
  r.params.p = p;
  r.params.q = q;
  return r;
}

SlackReport check_partial_trace_norm(const ComplexMatrix& m, double p,
                                     std::pair<std::size_t, std::size_t> dims) {
  if (std::isnan(p) || p < 1.0)
    throw std::domain_error("check_partial_trace_norm: p must lie in [1, inf]");
  if (m.dim() != dims.first * dims.second)
    throw std::invalid_argument("check_partial_trace_norm: dims do not match matrix");
  const ComplexMatrix reduced = partial_trace(m, {dims.first, dims.second}, {0});

  SlackReport r;
  r.lhs = schatten_norm(reduced, p);
  const double exponent = std::isinf(p) ? 1.0 : (p - 1.0) / p;
  r.rhs = std::pow(static_cast<double>(dims.second), exponent) * schatten_norm(m, p);
  r.slack = r.rhs - r.lhs;
  r.params.p = p;
  r.params.n = static_cast<int>(dims.first);
  r.params.m = static_cast<int>(dims.second);
  return r;
}

SlackReport check_spectral_power(const ComplexMatrix& m, double q) {
  if (!(q >= 1.0) || std::isinf(q))
    throw std::domain_error("check_spectral_power: q must be finite and >= 1");
  SlackReport r;
  r.lhs = std::pow(schatten_norm(m, q), q);
  r.rhs = std::pow(schatten_norm(m, kInfP), q - 1.0) * schatten_norm(m, 1.0);
  r.slack = r.rhs - r.lhs;
  r.params.q = q;
  return r;
}

SlackReport check_epr_channel_norm(const QuantumChannel& c, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("check_epr_channel_norm: n must lie in [1, 3]");
  const std::size_t half = std::size_t{1} << n;
  if (c.in_dim != half)
    throw std::invalid_argument("check_epr_channel_norm: channel input is not 2^n");
  int t = -1;
  for (int k = 0; k <= 12; ++k)
    if (c.out_dim == (std::size_t{1} << k)) t = k;
  if (t < 0)
    throw std::invalid_argument("check_epr_channel_norm: channel output is not a power of two");
  if (!c.is_trace_nonincreasing())
    throw std::invalid_argument("check_epr_channel_norm: channel must be trace-nonincreasing");

  const ComplexMatrix moved = channel_apply(c, epr_state(n), 0, {half, half});

  SlackReport r;
  r.lhs = schatten_norm(moved, kInfP);
  r.rhs = std::pow(2.0, -n + t);
  r.slack = r.rhs - r.lhs;
  r.params.n = n;
  r.params.m = t;
  return r;
}

SlackReport check_trace_identity(const ComplexMatrix& a, const ComplexMatrix& b, double rho,
                                 int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("check_trace_identity: n must lie in [1, 3]");
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("check_trace_identity: rho must lie in [0, 1]");
  const std::size_t half = std::size_t{1} << n;
  if (a.dim() != half || b.dim() != half)
    throw std::invalid_argument("check_trace_identity: operands must be 2^n x 2^n");

  const ComplexMatrix state = isotropic_state(rho, static_cast<std::size_t>(n));
  const Complex lhs = (kron(a, b) * state).trace();

  std::vector<std::size_t> qubits(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) qubits[f] = static_cast<std::size_t>(f);
  const ComplexMatrix moved = depolarize(a, rho, qubits, static_cast<std::size_t>(n));
  const Complex rhs =
      (moved * b.transpose()).trace() / static_cast<double>(std::size_t{1} << n);

  SlackReport r;
  r.lhs = std::abs(lhs);
  r.rhs = std::abs(rhs);
  r.slack = -std::abs(lhs - rhs);
  r.params.rho = rho;
  r.params.n = n;
  return r;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::hypercontractivity: return "hypercontractivity";
    case Suite::holder: return "holder";
    case Suite::partial_trace: return "partial-trace";
    case Suite::spectral_power: return "spectral-power";
    case Suite::epr_channel: return "epr-channel";
    case Suite::trace_identity: return "trace-identity";
  }
  throw std::logic_error("suite_name: unknown suite");
}

namespace {

struct Collector {
  SuiteResult res;

  explicit Collector(Suite s) {
    res.name = suite_name(s);
    res.min_slack = std::numeric_limits<double>::infinity();
  }

  void consider(SlackReport r, std::uint64_t cell_seed, long index, const std::string& kind,
                const ComplexMatrix* witness) {
    r.params.seed = cell_seed;
    r.params.index = index;
    r.params.kind = kind;
    ++res.trials;
    if (r.slack < res.min_slack) {
      res.min_slack = r.slack;
      res.worst = r.params;
      if (witness) res.witness = *witness;
    }
  }
};

SuiteResult run_hypercontractivity(const SuiteConfig& cfg) {
  Collector col(Suite::hypercontractivity);
  const std::pair<int, int> shapes[] = {{1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 1}, {1, 2}};
  const double ps[] = {1.0, 1.5, 2.0};
  const double qs[] = {2.0, 3.0, 4.0};
  const EnsembleKind kinds[] = {EnsembleKind::psd, EnsembleKind::hermitian};
  std::uint64_t cell = 0;
  for (auto [n, m] : shapes) {
    const std::size_t dim = std::size_t{1} << (n + m);
    for (double p : ps) {
      for (double q : qs) {
        const double rho = (p == q) ? 1.0 : std::sqrt((p - 1.0) / (q - 1.0));
        for (EnsembleKind kind : kinds) {
          const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA1), cell++);
          const auto draws = sample({kind, dim, cell_seed}, static_cast<std::size_t>(cfg.trials));
          for (long i = 0; i < cfg.trials; ++i) {
            SlackReport r = check_hypercontractivity(draws[static_cast<std::size_t>(i)], rho, p,
                                                     q, n, m);
            if (cfg.tamper != 0.0) r.slack -= cfg.tamper * r.lhs;
            col.consider(r, cell_seed, i, ensemble_kind_name(kind), &draws[static_cast<std::size_t>(i)]);
          }
          // Deterministic equality probe: identity is a fixed point of the
          // channel and saturates the inequality at m = 0.
          const ComplexMatrix id = ComplexMatrix::identity(dim);
          SlackReport r = check_hypercontractivity(id, rho, p, q, n, m);
          if (cfg.tamper != 0.0) r.slack -= cfg.tamper * r.lhs;
          col.consider(r, cell_seed, cfg.trials, "identity", &id);
        }
      }
    }
  }
  return col.res;
}

SuiteResult run_holder(const SuiteConfig& cfg) {
  Collector col(Suite::holder);
  const std::size_t dims[] = {2, 4};
  const double qs[] = {1.5, 2.0, 3.0};
  constexpr std::size_t kLen = 4;
  std::uint64_t cell = 0;
  for (std::size_t dim : dims) {
    for (double q : qs) {
      const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA2), cell++);
      const auto draws =
          sample({EnsembleKind::psd, dim, cell_seed}, 2 * kLen * static_cast<std::size_t>(cfg.trials));
      for (long i = 0; i < cfg.trials; ++i) {
        const auto base = draws.begin() + 2 * kLen * static_cast<std::size_t>(i);
        const std::vector<ComplexMatrix> as(base, base + kLen);
        const std::vector<ComplexMatrix> bs(base + kLen, base + 2 * kLen);
        col.consider(check_holder_sequences(as, bs, q), cell_seed, i, "psd", &as[0]);
      }
    }
  }
  return col.res;
}

SuiteResult run_partial_trace(const SuiteConfig& cfg) {
  Collector col(Suite::partial_trace);
  const std::pair<std::size_t, std::size_t> dims[] = {{2, 2}, {2, 4}, {4, 2}};
  const double ps[] = {1.0, 2.0, 3.0, kInfP};
  std::uint64_t cell = 0;
  for (auto d : dims) {
    for (double p : ps) {
      const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA3), cell++);
      const auto draws = sample({EnsembleKind::hermitian, d.first * d.second, cell_seed},
                                static_cast<std::size_t>(cfg.trials));
      for (long i = 0; i < cfg.trials; ++i)
        col.consider(check_partial_trace_norm(draws[static_cast<std::size_t>(i)], p, d),
                     cell_seed, i, "hermitian", &draws[static_cast<std::size_t>(i)]);
    }
  }
  return col.res;
}

SuiteResult run_spectral_power(const SuiteConfig& cfg) {
  Collector col(Suite::spectral_power);
  const std::size_t dims[] = {2, 4, 8};
  const double qs[] = {1.5, 2.0, 4.0};
  const EnsembleKind kinds[] = {EnsembleKind::hermitian, EnsembleKind::ginibre};
  std::uint64_t cell = 0;
  for (std::size_t dim : dims) {
    for (double q : qs) {
      for (EnsembleKind kind : kinds) {
        const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA4), cell++);
        const auto draws = sample({kind, dim, cell_seed}, static_cast<std::size_t>(cfg.trials));
        for (long i = 0; i < cfg.trials; ++i)
          col.consider(check_spectral_power(draws[static_cast<std::size_t>(i)], q), cell_seed, i,
                       ensemble_kind_name(kind), &draws[static_cast<std::size_t>(i)]);
      }
    }
  }
  return col.res;
}

SuiteResult run_epr_channel(const SuiteConfig& cfg) {
  Collector col(Suite::epr_channel);
  const std::pair<int, int> shapes[] = {{1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
  std::uint64_t cell = 0;
  for (auto [n, t] : shapes) {
    const std::size_t in = std::size_t{1} << n;
    const std::size_t out = std::size_t{1} << t;
    const std::size_t n_kraus = 2 * std::max<std::size_t>(1, in / out) + 1;
    for (int variant = 0; variant < 2; ++variant) {
      const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA5), cell++);
      Prng rng(cell_seed);
      for (long i = 0; i < cfg.trials; ++i) {
        QuantumChannel c = random_trace_preserving_channel(in, out, n_kraus, rng);
        std::string kind = "tp-channel";
        if (variant == 1) {
          // Trace-nonincreasing sub-channel: keep the front half of the
          // Kraus list.
          c.kraus.resize((c.kraus.size() + 1) / 2);
          kind = "subchannel";
        }
        col.consider(check_epr_channel_norm(c, n), cell_seed, i, kind, &c.kraus[0]);
      }
    }
  }
  return col.res;
}

SuiteResult run_trace_identity(const SuiteConfig& cfg) {
  Collector col(Suite::trace_identity);
  const int ns[] = {1, 2};
  const double rhos[] = {0.0, 0.3, 0.7, 1.0};
  std::uint64_t cell = 0;
  for (int n : ns) {
    const std::size_t dim = std::size_t{1} << n;
    for (double rho : rhos) {
      const std::uint64_t cell_seed = mix_seed(mix_seed(cfg.seed, 0xA6), cell++);
      const auto draws =
          sample({EnsembleKind::ginibre, dim, cell_seed}, 2 * static_cast<std::size_t>(cfg.trials));
      for (long i = 0; i < cfg.trials; ++i)
        col.consider(check_trace_identity(draws[static_cast<std::size_t>(2 * i)],
                                          draws[static_cast<std::size_t>(2 * i + 1)], rho, n),
                     cell_seed, i, "ginibre", &draws[static_cast<std::size_t>(2 * i)]);
    }
  }
  return col.res;
}

}  // namespace

SuiteResult run_suite(Suite s, const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_suite: trials must be >= 1");
  switch (s) {
    case Suite::hypercontractivity: return run_hypercontractivity(cfg);
    case Suite::holder: return run_holder(cfg);
    case Suite::partial_trace: return run_partial_trace(cfg);
    case Suite::spectral_power: return run_spectral_power(cfg);
    case Suite::epr_channel: return run_epr_channel(cfg);
    case Suite::trace_identity: return run_trace_identity(cfg);
  }
  throw std::logic_error("run_suite: unknown suite");
}

std::vector<SuiteResult> run_all_suites(const SuiteConfig& cfg) {
  return {
      run_suite(Suite::hypercontractivity, cfg), run_suite(Suite::holder, cfg),
      run_suite(Suite::partial_trace, cfg),      run_suite(Suite::spectral_power, cfg),
      run_suite(Suite::epr_channel, cfg),        run_suite(Suite::trace_identity, cfg),
  };
}

SlackReport extremal_search_hypercontractivity(double rho, double p, double q, int n, int m,
                                               std::uint64_t seed, int iters) {
  if (iters < 1) throw std::invalid_argument("extremal_search_hypercontractivity: iters >= 1");
  Prng rng(seed);
  const std::size_t dim = std::size_t{1} << (n + m);
  ComplexMatrix g = ginibre(dim, rng);
  SlackReport best = check_hypercontractivity(g.dagger() * g, rho, p, q, n, m);
  double step = 0.5;
  for (int it = 0; it < iters; ++it) {
    const ComplexMatrix g2 = g + ginibre(dim, rng) * step;
    const SlackReport r = check_hypercontractivity(g2.dagger() * g2, rho, p, q, n, m);
    if (r.slack < best.slack) {
      g = g2;
      best = r;
    } else {
      step *= 0.9;
    }
  }
  best.params.seed = seed;
  best.params.kind = "extremal-psd";
  return best;
}

}  // namespace crgen
