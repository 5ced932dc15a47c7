#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and writes to the given streams, so it can be driven from tests.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhahn/hahn.hpp"
#include "qhahn/hyper.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/registry.hpp"
#include "qhahn/verify.hpp"

namespace qhahn::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational parse_rational(const std::string& flag, const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) throw UsageError("--" + flag + ": not a rational number: '" + text + "'");
  return *r;
}

inline ScalarList parse_list(const std::string& flag, const std::string& text, long prec) {
  ScalarList out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(flag, item).to_scalar(prec));
  return out;
}

inline std::size_t parse_index(const std::string& flag, const std::string& text) {
  Rational r = parse_rational(flag, text);
  if (r.den != 1 || r.num < 0) throw UsageError("--" + flag + " must be a non-negative integer");
  return static_cast<std::size_t>(r.num);
}

// Working precision for a requested number of output digits.
inline long prec_for_digits(int digits) { return static_cast<long>(std::ceil(digits * 3.33)) + 64; }

inline int exit_code(const std::vector<VerificationReport>& reps) {
  bool fail = false, inconclusive = false;
  for (const auto& r : reps) {
    fail = fail || r.verdict == Verdict::Fail;
    inconclusive = inconclusive || r.verdict == Verdict::Inconclusive;
  }
  return fail ? kExitFail : inconclusive ? kExitInconclusive : kExitPass;
}

inline void print_text(std::ostream& out, const std::vector<VerificationReport>& reps) {
  for (const auto& r : reps) {
    std::string worst = "-";
    std::optional<Scalar> w;
    for (const auto& s : r.samples)
      if (s.max_rel_err && (!w || *w < *s.max_rel_err)) w = s.max_rel_err;
    if (w) worst = w->to_sci(3);
    out << r.id << "  " << to_string(r.verdict) << "  " << to_string(r.mode) << "  max_rel_err=" << worst << "\n";
    for (const auto& s : r.samples)
      if (!s.note.empty()) out << "    " << s.note << "\n";
    if (!r.note.empty()) out << "    " << r.note << "\n";
  }
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification harness for q-exponential operator identities and homogeneous Hahn polynomials", "qhahn"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print registered identity ids and citations");

  VerifyConfig cfg;
  std::string id, format = "text";
  auto* verify = app.add_subcommand("verify", "Verify one identity or all of them");
  verify->add_option("--id", id, "Identity id, or 'all'")->required();
  verify->add_option("--order", cfg.order, "Truncation order for coefficient modes");
  verify->add_option("--samples", cfg.samples, "Parameter tuples per identity");
  verify->add_option("--prec", cfg.prec, "Working precision in bits");
  verify->add_option("--tol", cfg.rel_tol, "Relative tolerance");
  verify->add_option("--seed", cfg.seed, "Sampler seed");
  verify->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a single function at rational arguments");
  std::string fn, a = "0", x = "0", y = "1", q, z = "0", n = "0", up, low;
  int digits = 30;
  eval->add_option("fn", fn, "phi | psi | rphis | qpoch")->required()->check(CLI::IsMember({"phi", "psi", "rphis", "qpoch"}));
  eval->add_option("--q", q, "Base q")->required();
  eval->add_option("--a", a, "Parameter a");
  eval->add_option("--x", x, "Variable x");
  eval->add_option("--y", y, "Variable y (phi)");
  eval->add_option("--z", z, "Argument z (rphis)");
  eval->add_option("--n", n, "Degree or length; 'inf' for qpoch");
  eval->add_option("--up", up, "Comma-separated upper parameters (rphis)");
  eval->add_option("--low", low, "Comma-separated lower parameters (rphis)");
  eval->add_option("--digits", digits, "Significant digits")->check(CLI::Range(1, 1000));

  std::vector<std::string> argv_store{"qhahn"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& i : registry()) out << i.id << "  " << i.citation << "\n";
      return kExitPass;
    }

    if (verify->parsed()) {
      try {
        cfg.validate();
      } catch (const OutOfRange& e) {
        throw detail::UsageError(e.what());
      }
      std::vector<Identity> chosen;
      if (id == "all") {
        chosen = registry();
      } else if (const Identity* one = find_identity(id)) {
        chosen.push_back(*one);
      } else {
        throw detail::UsageError("unknown identity id '" + id + "' (see 'qhahn list')");
      }
      auto reps = verify_all(chosen, cfg);
      if (format == "json") {
        nlohmann::ordered_json doc;
        doc["config"] = {{"order", cfg.order}, {"samples", cfg.samples}, {"prec", cfg.prec},
                         {"rel_tol", cfg.rel_tol}, {"zero_floor", cfg.zero_floor}, {"seed", cfg.seed}};
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : reps) arr.push_back(to_json(r));
        doc["reports"] = arr;
        out << doc.dump(2) << "\n";
      } else {
        detail::print_text(out, reps);
      }
      return detail::exit_code(reps);
    }

    long prec = detail::prec_for_digits(digits);
    QValue qv(detail::parse_rational("q", q).to_scalar(prec));
    Scalar av = detail::parse_rational("a", a).to_scalar(prec);
    Scalar result(prec);
    if (fn == "qpoch") {
      result = n == "inf" ? qpoch_inf(av, qv, TailConfig::bits(prec + 16, prec))
                          : qpoch(av, qv, detail::parse_index("n", n));
    } else if (fn == "phi") {
      result = phi(detail::parse_index("n", n), av, detail::parse_rational("x", x).to_scalar(prec),
                   detail::parse_rational("y", y).to_scalar(prec), qv);
    } else if (fn == "psi") {
      result = psi(detail::parse_index("n", n), av, detail::parse_rational("x", x).to_scalar(prec), qv);
    } else {
      PhiSpec spec{detail::parse_list("up", up, prec), detail::parse_list("low", low, prec), qv,
                   detail::parse_rational("z", z).to_scalar(prec)};
      result = rphis(spec, TailConfig::bits(prec + 16, prec));
    }
    out << result.to_string(digits) << "\n";
    return kExitPass;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qhahn::cli
