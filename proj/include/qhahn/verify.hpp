#pragma once

// Identity objects, parameter sampling, verification and reports.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qhahn/errors.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/rational.hpp"
#include "qhahn/scalar.hpp"

namespace qhahn {

enum class Mode { Numeric, CoeffT, CoeffTS };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Numeric: return "numeric";
    case Mode::CoeffT: return "coeff_t";
    case Mode::CoeffTS: return "coeff_ts";
  }
  return "?";
}

struct VerifyConfig {
  std::size_t order = 12;
  std::size_t samples = 5;
  long prec = 256;
  double rel_tol = 1e-25;
  double zero_floor = 1e-40;
  std::uint64_t seed = 42;

  void validate() const {
    if (samples < 1) throw OutOfRange("samples must be positive");
    if (prec < 64) throw OutOfRange("precision must be at least 64 bits");
    if (!(zero_floor > 0)) throw OutOfRange("zero_floor must be positive");
    if (!(rel_tol > 0) || !(rel_tol > std::ldexp(1.0, static_cast<int>(1 - prec))))
      throw OutOfRange("rel_tol must exceed 2^(1-prec)");
  }
  // Absolute target for every truncated sum and product, well below rel_tol.
  TailConfig tail() const { return TailConfig(Scalar::from_double(rel_tol, prec) * Scalar::exp2(-40, prec), 20000); }
};

enum class ParamKind {
  Unit,  // nonzero rational with |value| < 1
  Base,  // the base q, in [1/8, 7/8]
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Unit;
};

using ParamTuple = std::vector<std::pair<std::string, Rational>>;

/// One sampled parameter tuple as seen by the builders of an identity.
class Point {
 public:
  Point(const ParamTuple& params, const VerifyConfig& cfg)
      : params_(params), cfg_(cfg), tail_(cfg.tail()), q_(find_q(params, cfg.prec)) {}

  Scalar operator[](const std::string& name) const { return rational(name).to_scalar(cfg_.prec); }
  double approx(const std::string& name) const { return rational(name).to_double(); }
  const Rational& rational(const std::string& name) const {
    for (const auto& [n, v] : params_)
      if (n == name) return v;
    throw OutOfRange("unknown parameter " + name);
  }
  const QValue& q() const { return q_; }
  const TailConfig& tail() const { return tail_; }
  std::size_t order() const { return cfg_.order; }
  long prec() const { return cfg_.prec; }
  const ParamTuple& params() const { return params_; }

 private:
  static QValue find_q(const ParamTuple& params, long prec) {
    for (const auto& [n, v] : params)
      if (n == "q") return QValue(v.to_scalar(prec));
    return QValue(Scalar::rational(1, 2, prec));
  }

  ParamTuple params_;
  VerifyConfig cfg_;
  TailConfig tail_;
  QValue q_;
};

using Builder = std::function<ScalarList(const Point&)>;

/// A registered identity: lhs(p)[i] should equal rhs(p)[i] for every index i
/// and every tuple p accepted by `domain`. In coefficient modes the lists
/// hold series coefficients; in numeric mode they hold values. When `scale`
/// is set its entries give the magnitude a difference is measured against
/// (for sides that cancel to zero).
struct Identity {
  std::string id;
  std::string citation;
  Mode mode = Mode::Numeric;
  std::vector<ParamSpec> params;
  std::function<bool(const Point&)> domain;
  Builder lhs;
  Builder rhs;
  Builder scale;
};

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct SampleRecord {
  ParamTuple params;
  std::optional<Scalar> max_rel_err;  // unset when the sample was inconclusive
  std::size_t worst_index = 0;
  std::string note;
};

struct VerificationReport {
  std::string id;
  Mode mode = Mode::Numeric;
  Verdict verdict = Verdict::Pass;
  std::vector<SampleRecord> samples;
  std::string note;

  bool pass() const { return verdict == Verdict::Pass; }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline Rational draw(ParamKind kind, std::mt19937_64& rng) {
  std::int64_t den = 2 + static_cast<std::int64_t>(rng() % 15);  // 2..16
  if (kind == ParamKind::Base) {
    std::int64_t lo = (den + 7) / 8, hi = (7 * den) / 8;  // den/8 <= num <= 7 den/8
    std::int64_t num = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    return Rational::make(num, den);
  }
  std::int64_t num = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den - 1));
  if (rng() & 1) num = -num;
  return Rational::make(num, den);
}

}  // namespace detail

/// `cfg.samples` tuples inside the identity's domain, drawn from a stream
/// seeded by (cfg.seed, identity id) so every identity gets the same tuples
/// whether it runs alone or in the full registry.
inline std::vector<ParamTuple> sample_params(const Identity& identity, const VerifyConfig& cfg) {
  constexpr int kAttempts = 1000;
  std::mt19937_64 rng(cfg.seed ^ detail::fnv1a(identity.id));
  std::vector<ParamTuple> out;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    bool found = false;
    for (int attempt = 0; attempt < kAttempts && !found; ++attempt) {
      ParamTuple t;
      for (const auto& p : identity.params) t.emplace_back(p.name, detail::draw(p.kind, rng));
      if (!identity.domain || identity.domain(Point(t, cfg))) {
        out.push_back(std::move(t));
        found = true;
      }
    }
    if (!found) throw DomainTooTight(identity.id + ": no tuple found in " + std::to_string(kAttempts) + " attempts");
  }
  return out;
}

/// Largest |lhs_i - rhs_i| / max(|lhs_i|, |rhs_i|, scale_i, zero_floor) and its index.
inline std::pair<Scalar, std::size_t> max_deviation(const ScalarList& lhs, const ScalarList& rhs, const ScalarList& scale,
                                                    const Scalar& floor) {
  if (lhs.size() != rhs.size()) throw OutOfRange("lhs and rhs have different lengths");
  Scalar worst(0, floor.prec());
  std::size_t at = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    Scalar f = floor;
    if (i < scale.size()) f = max(f, abs(scale[i]));
    Scalar d = relative_deviation(lhs[i], rhs[i], f);
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  return {worst, at};
}

/// Verifies one identity at cfg.samples sampled tuples. Tail and pole
/// failures make the report inconclusive rather than failed.
inline VerificationReport verify_identity(const Identity& identity, const VerifyConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.id = identity.id;
  rep.mode = identity.mode;
  std::vector<ParamTuple> tuples;
  try {
    tuples = sample_params(identity, cfg);
  } catch (const DomainTooTight& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = e.what();
    return rep;
  }
  Scalar tol = Scalar::from_double(cfg.rel_tol, cfg.prec);
  Scalar floor = Scalar::from_double(cfg.zero_floor, cfg.prec);
  bool failed = false, inconclusive = false;
  for (auto& t : tuples) {
    SampleRecord rec;
    rec.params = t;
    try {
      Point p(t, cfg);
      ScalarList l = identity.lhs(p), r = identity.rhs(p);
      ScalarList s = identity.scale ? identity.scale(p) : ScalarList{};
      auto [dev, at] = max_deviation(l, r, s, floor);
      rec.max_rel_err = dev;
      rec.worst_index = at;
      if (!(dev <= tol)) failed = true;
    } catch (const TailNotReached& e) {
      rec.note = e.what();
      inconclusive = true;
    } catch (const PoleInLower& e) {
      rec.note = e.what();
      inconclusive = true;
    } catch (const SingularSeries& e) {
      rec.note = e.what();
      inconclusive = true;
    }
    rep.samples.push_back(std::move(rec));
  }
  rep.verdict = failed ? Verdict::Fail : inconclusive ? Verdict::Inconclusive : Verdict::Pass;
  return rep;
}

inline std::vector<VerificationReport> verify_all(const std::vector<Identity>& registry, const VerifyConfig& cfg) {
  std::vector<VerificationReport> out;
  out.reserve(registry.size());
  for (const auto& identity : registry) out.push_back(verify_identity(identity, cfg));
  return out;
}

inline nlohmann::ordered_json to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["id"] = rep.id;
  j["mode"] = to_string(rep.mode);
  j["pass"] = rep.pass();
  j["verdict"] = to_string(rep.verdict);
  auto samples = nlohmann::ordered_json::array();
  for (const auto& s : rep.samples) {
    nlohmann::ordered_json js;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [name, v] : s.params) params[name] = v.to_string();
    js["params"] = params;
    if (s.max_rel_err) {
      js["max_rel_err"] = s.max_rel_err->to_sci(6);
      js["worst_index"] = s.worst_index;
    } else {
      js["max_rel_err"] = nullptr;
      js["note"] = s.note;
    }
    samples.push_back(js);
  }
  j["samples"] = samples;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

}  // namespace qhahn
