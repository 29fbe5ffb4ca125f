#pragma once

// Command-line front end: one subcommand per experiment, each producing a
// Table written as CSV or JSON. Exit codes: 0 success, 1 usage or guard
// error, 2 a verification came out REFUTED.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ff2/arith.hpp"
#include "ff2/beta.hpp"
#include "ff2/extremal.hpp"
#include "ff2/laurent.hpp"
#include "ff2/params.hpp"
#include "ff2/sieve_weights.hpp"
#include "ff2/table_io.hpp"
#include "ff2/vdc.hpp"

namespace ff2::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRefuted = 2;

struct Options {
  std::optional<int> N, R, Q, K, max_deg;
  std::string eps = "1/100";
  std::string mode;
  std::string theta = "0";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool as_float = false;
  bool exact = false;
};

struct Outcome {
  Table table;
  bool refuted = false;
};

namespace detail {

inline std::string hex_word(Word w) {
  std::ostringstream os;
  os << "0x" << std::hex << w;
  return os.str();
}

inline int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw CLI::RequiredError(flag);
  return *v;
}

inline Params params_from(const Options& o) {
  return Params::derive(require(o.N, "--N"), parse_rat(o.eps), o.K, o.R, o.Q);
}

inline void add_param_meta(Table& t, const Params& p, const Options& o) {
  t.meta.emplace_back("N", std::to_string(p.N));
  t.meta.emplace_back("eps", to_string(p.eps));
  t.meta.emplace_back("K", std::to_string(p.K));
  t.meta.emplace_back("R", std::to_string(p.R));
  t.meta.emplace_back("Q", std::to_string(p.Q));
  std::string ov;
  for (auto [name, v] : {std::pair{"K", o.K}, std::pair{"R", o.R}, std::pair{"Q", o.Q}}) {
    if (v) ov += std::string(ov.empty() ? "" : ";") + name;
  }
  t.meta.emplace_back("overrides", ov.empty() ? "none" : ov);
}

inline std::vector<TorusPoint> support_of(const Poly2& M) {
  std::vector<TorusPoint> pts;
  for (Word g = 0; g < (Word{1} << M.degree()); ++g) pts.push_back(frac_part(Poly2::from_word(g), M));
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline void add_coeff_rows(Table& t, const CoeffTable& c) {
  t.columns = {{"num"}, {"den"}, {"value_num"}, {"value_den"}, {"value", true}};
  for (const auto& [k, v] : c.entries) {
    t.add_row({to_string(k.num()), to_string(k.den()), v.get_num().get_str(), v.get_den().get_str(),
               to_string(v)});
  }
}

}  // namespace detail

inline Outcome cmd_primes(const Options& o) {
  const int D = detail::require(o.max_deg, "--max-deg");
  if (D > 20) throw std::length_error("primes: --max-deg above cost guard 20");
  Outcome r;
  r.table.schema = "primes";
  r.table.meta.emplace_back("max_deg", std::to_string(D));
  r.table.columns = {{"degree"}, {"poly"}, {"word"}};
  for (const auto& p : primes_up_to(D)) {
    r.table.add_row({std::to_string(p.degree()), to_string(p), detail::hex_word(p.to_word())});
  }
  return r;
}

inline Outcome cmd_taus(const Options& o) {
  const int N = detail::require(o.N, "--N");
  if (N < 1 || N > 16) throw std::length_error("taus: --N must lie in [1, 16]");
  Outcome r;
  r.table.schema = "taus";
  r.table.meta.emplace_back("N", std::to_string(N));
  for (int B : {0, 1, 2}) r.table.meta.emplace_back("tau_power_sum_B" + std::to_string(B), to_string(tau_power_sum(N, B)));
  r.table.columns = {{"f"}, {"tau"}, {"mobius"}, {"phi"}, {"lambda_prime"}};
  for (Word w = 1; w < (Word{1} << N); ++w) {
    const Poly2 f = Poly2::from_word(w);
    r.table.add_row({to_string(f), to_string(tau(f)), std::to_string(mobius(f)), to_string(phi(f)),
                     std::to_string(lambda_prime(f))});
  }
  return r;
}

inline Outcome cmd_weights(const Options& o) {
  const int Q = detail::require(o.Q, "--Q");
  const std::string mode = o.mode.empty() ? "values" : o.mode;
  Outcome r;
  r.table.schema = "weights-" + mode;
  r.table.meta.emplace_back("Q", std::to_string(Q));
  if (mode == "alpha" || mode == "alpha-prime") {
    if (Q > 10) throw std::length_error("weights: --Q above cost guard 10");
    detail::add_coeff_rows(r.table, alpha_table(mode == "alpha" ? AlphaKind::plain : AlphaKind::prime, Q));
    return r;
  }
  if (mode != "values") throw CLI::ValidationError("--mode", "expected values, alpha or alpha-prime");
  const int N = o.N.value_or(4);
  if (N < 1 || N > 12) throw std::length_error("weights: --N must lie in [1, 12]");
  r.table.meta.emplace_back("N", std::to_string(N));
  r.table.columns = {{"f"}, {"lambda_tilde", true}, {"h_tilde", true}, {"lambda_trunc", true}, {"h_trunc", true}};
  const TruncatedSeries lam(SeriesKind::lambda, Q), hq(SeriesKind::h, Q);
  for (Word w = 0; w < (Word{1} << N); ++w) {
    const Poly2 f = Poly2::from_word(w);
    r.table.add_row({to_string(f), to_string(lambda_tilde(Q, f)), to_string(h_tilde(Q, f)), to_string(lam(f)),
                     to_string(hq(f))});
  }
  return r;
}

inline Outcome cmd_beta(const Options& o) {
  const int R = detail::require(o.R, "--R");
  const std::string mode = o.mode.empty() ? "both" : o.mode;
  Outcome r;
  r.table.schema = "beta-" + mode;
  r.table.meta.emplace_back("R", std::to_string(R));
  if (mode == "trunc") {
    const int Q = detail::require(o.Q, "--Q");
    if (R > 8 || Q > 8) throw std::length_error("beta: trunc table limited to R, Q <= 8");
    r.table.meta.emplace_back("Q", std::to_string(Q));
    detail::add_coeff_rows(r.table, beta_trunc_table(R, Q));
    return r;
  }
  if (mode != "closed" && mode != "conv" && mode != "both") {
    throw CLI::ValidationError("--mode", "expected closed, conv, both or trunc");
  }
  const Poly2 M = ff2::detail::product_of_primes_below(R);
  if (M.degree() > kBetaConvDegreeCap) throw std::length_error("beta: R above cost guard (deg M <= 16)");
  const bool closed = mode != "conv", conv = mode != "closed";
  r.table.columns = {{"num"}, {"den"}};
  if (closed) r.table.columns.push_back({"closed", true});
  if (conv) r.table.columns.push_back({"conv", true});
  if (closed && conv) r.table.columns.push_back({"verdict"});
  CoeffTable ct;
  if (conv) ct = beta_conv_table(R);
  bool all_equal = true;
  for (const auto& lam : detail::support_of(M)) {
    std::vector<std::string> row{to_string(lam.num()), to_string(lam.den())};
    Rat a, b;
    if (closed) row.push_back(to_string(a = beta_closed(lam, R)));
    if (conv) row.push_back(to_string(b = ct.at(lam)));
    if (closed && conv) {
      row.push_back(a == b ? "EQUAL" : "DIFFER");
      all_equal = all_equal && a == b;
    }
    r.table.add_row(std::move(row));
  }
  if (closed && conv) r.table.meta.emplace_back("verdict", all_equal ? "CERTIFIED" : "REFUTED");
  r.refuted = !all_equal;
  return r;
}

inline Outcome cmd_vdc_verify(const Options& o) {
  const Params p = detail::params_from(o);
  if (p.N > kExpSumDegreeCap) throw std::length_error("vdc-verify: --N above cost guard 24");
  const TorusPoint theta = parse_torus(o.theta);
  Outcome r;
  r.table.schema = "vdc-verify";
  detail::add_param_meta(r.table, p, o);
  r.table.meta.emplace_back("theta", to_string(theta));
  r.table.columns = {{"check"}, {"value", true}, {"reference", true}, {"verdict"}};

  const WeightTable wpp(SumKind::psi_prime, p);
  const Rat sum = wpp.sum(theta);
  const Rat predicted = beta_trunc(theta, p.R, p.Q) * pow2(p.N);
  // only lambda = theta survives when every other support point sits
  // farther than x^{-N} from theta
  const bool in_range = (p.R - 1) + (p.Q - 1) + theta.den().degree() <= p.N;
  std::string v33 = sum == predicted ? "OK" : (in_range ? "MISMATCH" : "OUT_OF_RANGE");
  r.table.add_row({"PROP33", to_string(sum), to_string(predicted), v33});
  r.refuted = v33 == "MISMATCH";

  const Rat limit31 = pow2(p.N - p.K) / 3;
  const Rat gap31 = prop31_gap(p, theta);
  r.table.add_row({"PROP31", to_string(gap31), to_string(limit31), gap31 <= limit31 ? "WITHIN" : "EXCEEDS"});

  if (ff2::detail::product_of_primes_below(p.R).degree() <= kBetaConvDegreeCap) {
    const Rat gap34 = prop34_gap(theta, p);
    const Rat limit34 = pow2(-p.K) / 5;
    r.table.add_row({"PROP34", to_string(gap34), to_string(limit34), gap34 <= limit34 ? "WITHIN" : "EXCEEDS"});
  }

  const auto T = t_function(p, theta);
  if (T) {
    r.table.add_row({"T", to_string(*T), "0", *T >= 0 ? "NONNEG" : "NEGATIVE"});
  } else {
    r.table.add_row({"T", "0", "0", "UNDEFINED"});
  }
  return r;
}

inline Outcome cmd_scan(const Options& o) {
  const Params p = detail::params_from(o);
  Outcome r;
  r.table.schema = "scan";
  detail::add_param_meta(r.table, p, o);
  const VdcCertificate cert = vdc_certify(p);
  const MajorArcScan scan = major_arc_scan(p, o.max_deg);
  r.table.meta.emplace_back("sum_psi", to_string(cert.total));
  r.table.meta.emplace_back("min_sum_psi_e", to_string(cert.min_sum));
  r.table.meta.emplace_back("argmin_theta", to_string(cert.argmin));
  r.table.meta.emplace_back("floor", to_string(cert.floor));
  r.table.meta.emplace_back("vdc_verdict", cert.certified() ? "CERTIFIED" : "REFUTED");
  if (cert.total + pow2(p.N - p.K) > 0) {
    r.table.meta.emplace_back("a0", to_string(cert.a0));
    r.table.meta.emplace_back("density_bound", to_string(cert.density_bound));
  }
  r.table.meta.emplace_back("exceedance_threshold", to_string(scan.threshold));
  r.table.meta.emplace_back("degree_threshold", std::to_string(scan.degree_threshold));
  r.table.meta.emplace_back("max_centre_degree", std::to_string(scan.max_centre_degree));
  r.table.meta.emplace_back("major_arc_verdict", scan.certified() ? "CERTIFIED" : "REFUTED");
  r.refuted = !cert.certified() || !scan.certified();
  if (o.exact && cert.certified()) {
    const auto ext = max_avoiding_set(p.N, ExtremalMode::exact, o.seed);
    const bool ok = Rat(static_cast<long>(ext.size)) <= cert.density_bound;
    r.table.meta.emplace_back("extremal_size", std::to_string(ext.size));
    r.table.meta.emplace_back("chain_verdict", ok ? "CERTIFIED" : "REFUTED");
    r.refuted = r.refuted || !ok;
  }
  r.table.columns = {{"theta_num"}, {"theta_den"}, {"sum_num"}, {"sum_den"},
                     {"dirichlet_u"}, {"dirichlet_s"}, {"verdict"}};
  for (const auto& row : scan.rows) {
    r.table.add_row({to_string(row.theta.num()), to_string(row.theta.den()), row.value.get_num().get_str(),
                     row.value.get_den().get_str(), to_string(row.centre.u), to_string(row.centre.s),
                     row.small_denominator ? "MAJOR" : "UNEXPLAINED"});
  }
  return r;
}

inline Outcome cmd_extremal(const Options& o) {
  const int N = detail::require(o.N, "--N");
  std::string mode = o.mode.empty() ? "exact" : o.mode;
  if (o.exact) mode = "exact";
  if (mode != "exact" && mode != "heuristic") throw CLI::ValidationError("--mode", "expected exact or heuristic");
  const auto res = max_avoiding_set(N, mode == "exact" ? ExtremalMode::exact : ExtremalMode::heuristic, o.seed);
  if (!verify_avoiding(res.witness, N)) throw std::logic_error("extremal witness failed verification");
  Outcome r;
  r.table.schema = "extremal";
  r.table.meta.emplace_back("mode", mode);
  r.table.meta.emplace_back("seed", std::to_string(o.seed));
  r.table.columns = {{"N"}, {"size"}, {"density", true}, {"exponent"}, {"witness"}};
  std::string witness;
  for (const auto& a : res.witness) witness += (witness.empty() ? "" : ";") + detail::hex_word(a.to_word());
  Rat density(static_cast<long>(res.size));
  density /= pow2(N);
  std::string exponent = "log2(" + std::to_string(res.size) + ")/" + std::to_string(N);
  if (o.as_float) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::log2(static_cast<double>(res.size)) / N);
    exponent = buf;
  }
  r.table.add_row({std::to_string(N), std::to_string(res.size), to_string(density), exponent, witness});
  return r;
}

inline Outcome cmd_exp_sum(const Options& o) {
  const Params p = detail::params_from(o);
  const std::string mode = o.mode.empty() ? "psi" : o.mode;
  SumKind kind;
  if (mode == "psi") {
    kind = SumKind::psi;
  } else if (mode == "psi_prime") {
    kind = SumKind::psi_prime;
  } else if (mode == "lambda_prime") {
    kind = SumKind::lambda_prime;
  } else if (mode == "lambda_trunc") {
    kind = SumKind::lambda_trunc;
  } else {
    throw CLI::ValidationError("--mode", "expected psi, psi_prime, lambda_prime or lambda_trunc");
  }
  const WeightTable w(kind, p);
  Outcome r;
  r.table.schema = "exp-sum";
  detail::add_param_meta(r.table, p, o);
  r.table.meta.emplace_back("kind", mode);
  r.table.columns = {{"theta_num"}, {"theta_den"}, {"sum", true}};
  if (o.theta == "grid") {
    if (p.N > kScanDegreeCap) throw std::length_error("exp-sum: grid limited to N <= 20");
    const auto sums = w.grid_sums();
    const Poly2 xn = Poly2::monomial(p.N);
    std::vector<std::pair<TorusPoint, Rat>> rows;
    for (Word v = 0; v < sums.size(); ++v) rows.emplace_back(frac_part(Poly2::from_word(v), xn), sums[v]);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, s] : rows) r.table.add_row({to_string(t.num()), to_string(t.den()), to_string(s)});
  } else {
    const TorusPoint theta = parse_torus(o.theta);
    r.table.add_row({to_string(theta.num()), to_string(theta.den()), to_string(w.sum(theta))});
  }
  return r;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact experiments on Fourier analysis over F_2[x]", "ff2"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "write to this file (atomically) instead of stdout");
  app.add_flag("--float", o.as_float, "add a 17-digit float column after each exact rational");
  app.add_option("--seed", o.seed, "seed for randomized heuristics");

  auto* primes = app.add_subcommand("primes", "irreducible polynomials by degree");
  primes->add_option("--max-deg", o.max_deg, "largest degree")->required();
  auto* taus = app.add_subcommand("taus", "tau, mu, phi and Lambda' on G_N");
  taus->add_option("--N", o.N)->required();
  auto* weights = app.add_subcommand("weights", "sieve weights, or the alpha / alpha' tables");
  weights->add_option("--Q", o.Q)->required();
  weights->add_option("--N", o.N);
  weights->add_option("--mode", o.mode, "values, alpha or alpha-prime");
  auto* beta = app.add_subcommand("beta", "beta coefficients: closed form, convolution, truncated");
  beta->add_option("--R", o.R)->required();
  beta->add_option("--Q", o.Q);
  beta->add_option("--mode", o.mode, "closed, conv, both or trunc");

  auto add_params = [&o](CLI::App* sub) {
    sub->add_option("--N", o.N)->required();
    sub->add_option("--eps", o.eps, "rational, e.g. 1/100");
    sub->add_option("--K", o.K, "override K");
    sub->add_option("--R", o.R, "override R");
    sub->add_option("--Q", o.Q, "override Q");
  };
  auto* verify = app.add_subcommand("vdc-verify", "identity and gap checks at one theta");
  add_params(verify);
  verify->add_option("--theta", o.theta, "torus point, e.g. (1)/(x^2+x+1)");
  auto* scan = app.add_subcommand("scan", "grid scan of the witness sums and major arcs");
  add_params(scan);
  scan->add_option("--max-deg", o.max_deg, "major-arc denominator degree threshold");
  scan->add_flag("--exact", o.exact, "also compare with the exact extremal size");
  auto* extremal = app.add_subcommand("extremal", "largest difference-avoiding set");
  extremal->add_option("--N", o.N)->required();
  extremal->add_option("--mode", o.mode, "exact or heuristic");
  extremal->add_flag("--exact", o.exact, "same as --mode exact");
  auto* exps = app.add_subcommand("exp-sum", "exponential sum of a weight over G_N");
  add_params(exps);
  exps->add_option("--theta", o.theta, "torus point, or 'grid' for every v/x^N");
  exps->add_option("--mode", o.mode, "psi, psi_prime, lambda_prime or lambda_trunc");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Outcome res;
    if (primes->parsed()) res = cmd_primes(o);
    else if (taus->parsed()) res = cmd_taus(o);
    else if (weights->parsed()) res = cmd_weights(o);
    else if (beta->parsed()) res = cmd_beta(o);
    else if (verify->parsed()) res = cmd_vdc_verify(o);
    else if (scan->parsed()) res = cmd_scan(o);
    else if (extremal->parsed()) res = cmd_extremal(o);
    else res = cmd_exp_sum(o);
    const std::string text = o.format == "json" ? to_json(res.table, o.as_float) : to_csv(res.table, o.as_float);
    if (o.out.empty()) {
      out << text;
    } else {
      write_atomically(o.out, text);
    }
    return res.refuted ? kExitRefuted : kExitOk;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "cost guard: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace ff2::cli
