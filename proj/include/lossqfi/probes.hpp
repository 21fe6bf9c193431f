#pragma once

// Probe-state families and their canonical text forms, e.g.
//   fock:n=2   qubit:nbar=0.5   qutrit:nbar=0.5,beta=0.3   cat:alpha=1.2,sign=+
//   subtracted:eta=1.0,r=0.4   superposition:c=0.6/0.8i   gaussian:eta=1,r=0.3,theta=0

#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lossqfi/fock_core.hpp"
#include "lossqfi/format.hpp"
#include "lossqfi/subtraction.hpp"

namespace lossqfi {

namespace probe {

struct Fock {
  int n = 0;
};

/// cos(theta)|0> + e^{i phase} sin(theta)|1>
struct Qubit {
  double theta = 0.0;
  double phase = 0.0;
};

/// cos(alpha)|0> + e^{i mu} sin(alpha) sin(beta)|1> + e^{i nu} sin(alpha) cos(beta)|2>
/// with alpha fixed by the mean photon number.
struct Qutrit {
  double nbar = 0.5;
  double beta = 0.0;
  double mu = std::numbers::pi;
  double nu = std::numbers::pi;
};

struct Superposition {
  std::vector<cplx> coefficients;
};

struct Coherent {
  cplx alpha;
};

/// N (|alpha> + sign |-alpha>)
struct Cat {
  double alpha = 1.0;
  int sign = +1;
};

/// D(eta) S(r e^{i theta_rel}) |0>
struct Gaussian {
  cplx eta;
  double r = 0.0;
  double theta_rel = 0.0;
};

/// a D(eta) S(r) |0>, renormalized
struct PhotonSubtracted {
  double eta = 0.0;
  double r = 0.0;
};

/// PhotonSubtracted cut to its first `levels` Fock amplitudes
struct TruncatedSubtracted {
  double eta = 0.0;
  double r = 0.0;
  int levels = 3;
};

}  // namespace probe

using ProbeSpec = std::variant<probe::Fock, probe::Qubit, probe::Qutrit, probe::Superposition,
                               probe::Coherent, probe::Cat, probe::Gaussian,
                               probe::PhotonSubtracted, probe::TruncatedSubtracted>;

inline probe::Qubit qubit_from_nbar(double nbar, double phase = 0.0) {
  if (!(nbar >= 0.0 && nbar <= 1.0)) {
    throw Error(ErrorCode::domain, "qubit mean photon number must lie in [0, 1]");
  }
  return {std::asin(std::sqrt(nbar)), phase};
}

/// alpha = arcsin sqrt(2 nbar / (cos 2 beta + 3)); throws when unattainable.
inline double qutrit_alpha(double nbar, double beta) {
  if (!(nbar > 0.0 && nbar <= 2.0)) {
    throw Error(ErrorCode::domain, "qutrit mean photon number must lie in (0, 2]");
  }
  if (!(beta >= 0.0 && beta <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::domain, "qutrit beta must lie in [0, pi/2]");
  }
  double arg = 2.0 * nbar / (std::cos(2.0 * beta) + 3.0);
  if (arg > 1.0 + 1e-12) {
    throw Error(ErrorCode::domain, "qutrit (nbar, beta) unattainable: 2 nbar / (cos 2beta + 3) > 1");
  }
  arg = std::min(arg, 1.0);
  return std::asin(std::sqrt(arg));
}

/// Normalized c_j = k_j / |k| for the 3-level truncation of a D(eta) S(r)|0>,
/// with k0 = eta (tanh r + 1), k1 = k0^2 - tanh r, k2 = k0 (k0^2 - 3 tanh r)/sqrt 2.
inline std::array<double, 3> truncated_subtracted_coeffs(double eta, double r) {
  const double t = std::tanh(r);
  const double k0 = eta * (t + 1.0);
  const double k1 = k0 * k0 - t;
  const double k2 = k0 * (k0 * k0 - 3.0 * t) / std::numbers::sqrt2;
  const double norm = std::sqrt(k0 * k0 + k1 * k1 + k2 * k2);
  if (!(norm > 1e-300)) {
    throw Error(ErrorCode::degenerate_state, "truncated photon-subtracted state vanishes");
  }
  return {k0 / norm, k1 / norm, k2 / norm};
}

struct QutritCoords {
  double nbar;
  double beta;
};

/// Inverse of the qutrit parametrization (phases discarded).
inline QutritCoords qutrit_coords(const FockVector& psi) {
  for (int m = 3; m < psi.cutoff(); ++m) {
    if (std::abs(psi[m]) >= 1e-9) {
      throw Error(ErrorCode::domain, "state has support above level 2");
    }
  }
  const double c1 = psi.cutoff() > 1 ? std::abs(psi[1]) : 0.0;
  const double c2 = psi.cutoff() > 2 ? std::abs(psi[2]) : 0.0;
  if (c1 + c2 == 0.0) {
    throw Error(ErrorCode::domain, "beta undefined for the vacuum");
  }
  return {c1 * c1 + 2.0 * c2 * c2, std::atan2(c1, c2)};
}

namespace detail {

inline FockVector cat_state(double alpha, int sign, const CutoffPolicy& policy) {
  if (alpha == 0.0) throw Error(ErrorCode::degenerate_state, "cat state needs alpha != 0");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::domain, "cat sign must be +1 or -1");
  const FockVector coh = displaced_squeezed_vacuum(alpha, 0.0, 0.0, policy);
  CVector amps = coh.amplitudes();
  // <m|-alpha> = (-1)^m <m|alpha>
  for (int m = 0; m < amps.size(); ++m) {
    const bool odd = (m % 2) != 0;
    amps(m) *= odd ? (1.0 - sign) : (1.0 + sign);
  }
  return FockVector(std::move(amps));
}

inline FockVector subtracted_state(double eta, double r, const CutoffPolicy& policy) {
  return photon_subtract(displaced_squeezed_vacuum(eta, r, 0.0, policy));
}

}  // namespace detail

inline FockVector build_probe(const ProbeSpec& spec, const CutoffPolicy& policy = {}) {
  return std::visit(
      [&](const auto& p) -> FockVector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, probe::Fock>) {
          if (p.n < 0) throw Error(ErrorCode::domain, "Fock photon number must be >= 0");
          if (p.n + 1 > policy.cap) throw Error(ErrorCode::cutoff_overflow, "Fock level above cutoff cap");
          return FockVector::basis(p.n, p.n + 1);
        } else if constexpr (std::is_same_v<T, probe::Qubit>) {
          if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 2)) {
            throw Error(ErrorCode::domain, "qubit theta must lie in [0, pi/2]");
          }
          CVector v(2);
          v << std::cos(p.theta), std::polar(std::sin(p.theta), p.phase);
          return FockVector(std::move(v));
        } else if constexpr (std::is_same_v<T, probe::Qutrit>) {
          const double alpha = qutrit_alpha(p.nbar, p.beta);
          const double sa = std::sin(alpha);
          CVector v(3);
          v << std::cos(alpha), std::polar(sa * std::sin(p.beta), p.mu),
              std::polar(sa * std::cos(p.beta), p.nu);
          return FockVector(std::move(v));
        } else if constexpr (std::is_same_v<T, probe::Superposition>) {
          if (p.coefficients.empty()) throw Error(ErrorCode::invalid_dimension, "empty superposition");
          CVector v(static_cast<Eigen::Index>(p.coefficients.size()));
          for (std::size_t m = 0; m < p.coefficients.size(); ++m) v(static_cast<Eigen::Index>(m)) = p.coefficients[m];
          return FockVector(std::move(v));
        } else if constexpr (std::is_same_v<T, probe::Coherent>) {
          return displaced_squeezed_vacuum(p.alpha, 0.0, 0.0, policy);
        } else if constexpr (std::is_same_v<T, probe::Cat>) {
          return detail::cat_state(p.alpha, p.sign, policy);
        } else if constexpr (std::is_same_v<T, probe::Gaussian>) {
          return displaced_squeezed_vacuum(p.eta, p.r, p.theta_rel, policy);
        } else if constexpr (std::is_same_v<T, probe::PhotonSubtracted>) {
          return detail::subtracted_state(p.eta, p.r, policy);
        } else {
          if (p.levels < 1) throw Error(ErrorCode::invalid_dimension, "truncation needs L >= 1");
          if (p.levels == 3) {
            const auto c = truncated_subtracted_coeffs(p.eta, p.r);
            CVector v(3);
            v << c[0], c[1], c[2];
            return FockVector(std::move(v));
          }
          return truncate_levels(detail::subtracted_state(p.eta, p.r, policy), p.levels);
        }
      },
      spec);
}

/// Mean photon number fixed by the parametrization, when there is one.
inline std::optional<double> nominal_nbar(const ProbeSpec& spec) {
  if (const auto* f = std::get_if<probe::Fock>(&spec)) return static_cast<double>(f->n);
  if (const auto* q = std::get_if<probe::Qubit>(&spec)) return std::sin(q->theta) * std::sin(q->theta);
  if (const auto* q = std::get_if<probe::Qutrit>(&spec)) return q->nbar;
  if (const auto* c = std::get_if<probe::Coherent>(&spec)) return std::norm(c->alpha);
  if (const auto* g = std::get_if<probe::Gaussian>(&spec)) {
    const double sh = std::sinh(g->r);
    return std::norm(g->eta) + sh * sh;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

inline double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::parse, "bad number '" + s + "' for " + std::string(what));
  }
  return v;
}

inline int parse_int(std::string_view text, std::string_view what) {
  const double v = parse_real(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorCode::parse, "expected an integer for " + std::string(what));
  }
  return static_cast<int>(v);
}

// Accepts "a", "bi", "a+bi", "a-bi", "i", "-i".
inline cplx parse_complex(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::parse, "empty complex number");
  if (s.back() != 'i') return parse_real(s, "coefficient");
  s.pop_back();
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, "imaginary part");
  };
  if (split == std::string::npos) return {0.0, imag_of(s)};
  return {parse_real(s.substr(0, split), "real part"), imag_of(s.substr(split))};
}

inline std::string format_complex(cplx c) {
  if (c.imag() == 0.0) return format_number(c.real());
  std::string im = format_number(c.imag());
  if (c.real() == 0.0) return im + "i";
  if (im[0] != '-') im = "+" + im;
  return format_number(c.real()) + im + "i";
}

using KeyValues = std::map<std::string, std::string, std::less<>>;

inline KeyValues parse_key_values(std::string_view body, std::string_view family) {
  KeyValues kv;
  if (body.empty()) return kv;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::string_view item = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::parse, "expected key=value in '" + std::string(family) + "' spec, got '" +
                                        std::string(item) + "'");
    }
    if (!kv.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second) {
      throw Error(ErrorCode::parse, "repeated key '" + std::string(item.substr(0, eq)) + "' in " +
                                        std::string(family) + " spec");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return kv;
}

class KeyReader {
 public:
  KeyReader(KeyValues kv, std::string family) : kv_(std::move(kv)), family_(std::move(family)) {}

  bool has(std::string_view key) const { return kv_.find(key) != kv_.end(); }

  std::string take(std::string_view key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw Error(ErrorCode::parse, family_ + " spec is missing '" + std::string(key) + "'");
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  double real(std::string_view key) { return parse_real(take(key), key); }
  double real_or(std::string_view key, double fallback) { return has(key) ? real(key) : fallback; }
  int integer(std::string_view key) { return parse_int(take(key), key); }

  void finish() const {
    if (!kv_.empty()) {
      throw Error(ErrorCode::parse, "unknown key '" + kv_.begin()->first + "' in " + family_ + " spec");
    }
  }

 private:
  KeyValues kv_;
  std::string family_;
};

}  // namespace detail

inline ProbeSpec parse_probe(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string family(text.substr(0, colon));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  detail::KeyReader keys(detail::parse_key_values(body, family), family);

  ProbeSpec spec;
  if (family == "fock") {
    spec = probe::Fock{keys.integer("n")};
  } else if (family == "vacuum") {
    spec = probe::Fock{0};
  } else if (family == "qubit") {
    const double phase = keys.real_or("phase", 0.0);
    if (keys.has("theta")) {
      spec = probe::Qubit{keys.real("theta"), phase};
    } else {
      spec = qubit_from_nbar(keys.real("nbar"), phase);
    }
  } else if (family == "qutrit") {
    probe::Qutrit q;
    q.nbar = keys.real("nbar");
    q.beta = keys.real_or("beta", 0.0);
    q.mu = keys.real_or("mu", std::numbers::pi);
    q.nu = keys.real_or("nu", std::numbers::pi);
    spec = q;
  } else if (family == "superposition") {
    probe::Superposition s;
    const std::string list = keys.take("c");
    std::size_t start = 0;
    for (;;) {
      const std::size_t slash = list.find('/', start);
      s.coefficients.push_back(detail::parse_complex(list.substr(start, slash == std::string::npos ? list.npos : slash - start)));
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
    spec = s;
  } else if (family == "coherent") {
    const double modulus = keys.real("alpha");
    spec = probe::Coherent{std::polar(modulus, keys.real_or("phase", 0.0))};
  } else if (family == "cat") {
    probe::Cat c;
    c.alpha = keys.real("alpha");
    if (keys.has("sign")) {
      const std::string s = keys.take("sign");
      if (s == "+" || s == "+1" || s == "1") {
        c.sign = 1;
      } else if (s == "-" || s == "-1") {
        c.sign = -1;
      } else {
        throw Error(ErrorCode::parse, "cat sign must be + or -");
      }
    }
    spec = c;
  } else if (family == "gaussian") {
    probe::Gaussian g;
    g.eta = keys.has("eta") ? detail::parse_complex(keys.take("eta")) : cplx(0.0);
    g.r = keys.real_or("r", 0.0);
    g.theta_rel = keys.real_or("theta", 0.0);
    spec = g;
  } else if (family == "squeezed") {
    spec = probe::Gaussian{0.0, keys.real("r"), keys.real_or("theta", 0.0)};
  } else if (family == "subtracted") {
    spec = probe::PhotonSubtracted{keys.real("eta"), keys.real("r")};
  } else if (family == "truncsub") {
    probe::TruncatedSubtracted t;
    t.eta = keys.real("eta");
    t.r = keys.real("r");
    if (keys.has("levels")) t.levels = keys.integer("levels");
    spec = t;
  } else {
    throw Error(ErrorCode::parse, "unknown probe family '" + family + "'");
  }
  keys.finish();
  return spec;
}

inline std::string format_probe(const ProbeSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, probe::Fock>) {
          return "fock:n=" + std::to_string(p.n);
        } else if constexpr (std::is_same_v<T, probe::Qubit>) {
          const double s = std::sin(p.theta);
          std::string out = "qubit:nbar=" + format_number(s * s);
          if (p.phase != 0.0) out += ",phase=" + format_number(p.phase);
          return out;
        } else if constexpr (std::is_same_v<T, probe::Qutrit>) {
          std::string out = "qutrit:nbar=" + format_number(p.nbar) + ",beta=" + format_number(p.beta);
          if (p.mu != std::numbers::pi) out += ",mu=" + format_number(p.mu);
          if (p.nu != std::numbers::pi) out += ",nu=" + format_number(p.nu);
          return out;
        } else if constexpr (std::is_same_v<T, probe::Superposition>) {
          std::string out = "superposition:c=";
          for (std::size_t m = 0; m < p.coefficients.size(); ++m) {
            if (m) out += "/";
            out += detail::format_complex(p.coefficients[m]);
          }
          return out;
        } else if constexpr (std::is_same_v<T, probe::Coherent>) {
          std::string out = "coherent:alpha=" + format_number(std::abs(p.alpha));
          if (p.alpha.imag() != 0.0) out += ",phase=" + format_number(std::arg(p.alpha));
          return out;
        } else if constexpr (std::is_same_v<T, probe::Cat>) {
          return "cat:alpha=" + format_number(p.alpha) + ",sign=" + (p.sign > 0 ? "+" : "-");
        } else if constexpr (std::is_same_v<T, probe::Gaussian>) {
          return "gaussian:eta=" + detail::format_complex(p.eta) + ",r=" + format_number(p.r) +
                 ",theta=" + format_number(p.theta_rel);
        } else if constexpr (std::is_same_v<T, probe::PhotonSubtracted>) {
          return "subtracted:eta=" + format_number(p.eta) + ",r=" + format_number(p.r);
        } else {
          return "truncsub:eta=" + format_number(p.eta) + ",r=" + format_number(p.r) +
                 ",levels=" + std::to_string(p.levels);
        }
      },
      spec);
}

}  // namespace lossqfi
