// Acceptance checks AC1..AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mutants.hpp"
#include "qhahn/cli.hpp"
#include "qhahn/registry.hpp"

using namespace qhahn;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

double worst_error(const VerificationReport& r) {
  double w = 0;
  for (const auto& s : r.samples) {
    if (!s.max_rel_err) return 1.0;
    w = std::max(w, s.max_rel_err->to_double());
  }
  return w;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct CliRun {
  int code;
  std::string out;
  double seconds;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  auto t0 = std::chrono::steady_clock::now();
  int code = cli::run(args, out, err);
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {code, out.str(), dt};
}

const std::vector<std::string> kFullRun = {"verify", "--id", "all", "--format", "json"};

Outcome ac1(const CliRun& run) {
  auto doc = nlohmann::json::parse(run.out);
  std::vector<std::string> bad;
  for (const auto& r : doc["reports"])
    if (r["verdict"] != "pass") bad.push_back(r["id"].get<std::string>() + "=" + r["verdict"].get<std::string>());
  std::string detail = std::to_string(doc["reports"].size()) + " identities in " + sci(run.seconds) + " s";
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty() && run.seconds < 300 && run.code == 0, detail};
}

Outcome ac2() {
  auto rep = verify_identity(*find_identity("I-3.2"), VerifyConfig{});
  double w = worst_error(rep);
  return {rep.pass() && w < 1e-25 && rep.samples.size() == 5, "max rel err " + sci(w)};
}

Outcome ac3() {
  VerifyConfig c;
  c.rel_tol = 1e-15;
  auto main = verify_identity(*find_identity("I-5.2"), c);
  auto reduced = verify_identity(*find_identity("I-5.2r"), c);
  double wm = worst_error(main), wr = worst_error(reduced);
  return {main.pass() && reduced.pass() && wm < 1e-15 && wr < 1e-15,
          "summation " + sci(wm) + ", a=0 reduction " + sci(wr)};
}

Outcome ac4() {
  Identity grid;
  grid.id = "operator-oracles";
  grid.params = {{"a", ParamKind::Unit}, {"x", ParamKind::Unit}, {"q", ParamKind::Base}};
  VerifyConfig c;
  auto tuples = sample_params(grid, c);
  double worst = 0;
  bool plain_equal = true;
  for (const auto& t : tuples) {
    Point p(t, c);
    Scalar a = p["a"], x = p["x"], zero(0, c.prec);
    for (const auto& f : two_variable_functions())
      for (std::size_t n = 0; n <= 8; ++n) {
        for (auto kind : {OperatorKind::Delta, OperatorKind::Omega}) {
          Scalar closed = op_pow_closed(kind, n, f, x, a, p.q());
          Scalar iter = op_pow_iter(kind, n, f, x, a, p.q());
          worst = std::max(worst, relative_deviation(closed, iter, Scalar::exp2(-200, c.prec)).to_double());
        }
        // with a = 0 the generalized operator is x + eta_x term for term
        plain_equal = plain_equal && op_pow_iter(OperatorKind::Delta, n, f, x, zero, p.q()) ==
                                         op_pow_iter(OperatorKind::DeltaPlain, n, f, x, zero, p.q());
        plain_equal = plain_equal && op_pow_closed(OperatorKind::Delta, n, f, x, zero, p.q()) ==
                                         op_pow_closed(OperatorKind::DeltaPlain, n, f, x, zero, p.q());
      }
  }
  return {worst < 1e-25 && plain_equal, "max rel err " + sci(worst) + (plain_equal ? ", a=0 identical" : ", a=0 differs")};
}

Outcome ac5() {
  Identity grid;
  grid.id = "vanishing-sum";
  grid.params = {{"a", ParamKind::Unit}, {"x", ParamKind::Unit}, {"q", ParamKind::Base}};
  VerifyConfig c;
  double worst = 0;
  for (const auto& t : sample_params(grid, c)) {
    Point p(t, c);
    Scalar a = p["a"], x = p["x"], one(1, c.prec);
    for (std::size_t n = 1; n <= 10; ++n) {
      Scalar sum(0, c.prec), big(0, c.prec);
      for (std::size_t k = 0; k <= n; ++k) {
        Scalar term = gauss_binom(n, k, p.q()) * signed_qbinom2(p.q().value(), static_cast<long>(k)) * psi(k, a, x, p.q()) *
                      phi(n - k, a, x, one, p.q());
        sum += term;
        big = max(big, abs(term));
      }
      worst = std::max(worst, (abs(sum) / big).to_double());
    }
  }
  return {worst < 1e-30, "max |sum|/max|term| " + sci(worst)};
}

Outcome ac6() {
  VerifyConfig c;
  c.samples = 10;
  bool ok = true;
  std::string detail;
  for (const char* id : {"I-0a", "I-0b", "I-0c", "I-0d"}) {
    auto rep = verify_identity(*find_identity(id), c);
    double w = worst_error(rep);
    ok = ok && rep.pass() && w < 1e-25;
    detail += std::string(detail.empty() ? "" : ", ") + id + " " + sci(w);
  }
  return {ok, detail};
}

Outcome ac7() {
  auto m1 = verify_identity(mutants::mehler_mutant(), VerifyConfig{});
  auto m2 = verify_identity(mutants::summation_mutant(), VerifyConfig{});
  return {m1.verdict == Verdict::Fail && m2.verdict == Verdict::Fail,
          "q-Mehler mutant " + to_string(m1.verdict) + ", summation mutant " + to_string(m2.verdict)};
}

Outcome ac8(const CliRun& first) {
  CliRun second = cli_run(kFullRun);
  return {first.out == second.out && !first.out.empty(),
          std::to_string(first.out.size()) + " bytes, " + (first.out == second.out ? "identical" : "different")};
}

}  // namespace

int main() {
  CliRun full = cli_run(kFullRun);
  std::vector<std::pair<std::string, Outcome>> results;
  auto report = [&](const std::string& name, const std::string& what, Outcome o) {
    std::cout << name << " " << (o.ok ? "PASS" : "FAIL") << "  " << what << ": " << o.detail << std::endl;
    results.emplace_back(name, o);
  };
  report("AC1", "full registry at defaults", ac1(full));
  report("AC2", "q-Mehler coefficients to order 12", ac2());
  report("AC3", "summation formula and its a=0 reduction", ac3());
  report("AC4", "closed vs iterated operator powers", ac4());
  report("AC5", "vanishing Al-Salam-Carlitz/Hahn sum", ac5());
  report("AC6", "classical baselines at 10 tuples", ac6());
  report("AC7", "mutants are rejected", ac7());
  report("AC8", "byte-identical JSON across runs", ac8(full));
  bool all = true;
  for (const auto& r : results) all = all && r.second.ok;
  return all ? 0 : 1;
}
