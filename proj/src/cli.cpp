#include "choqroof/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "choqroof/choquet.hpp"
#include "choqroof/errors.hpp"
#include "choqroof/functionals.hpp"
#include "choqroof/io.hpp"
#include "choqroof/oracles.hpp"
#include "choqroof/roof.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

namespace {

struct CommonOpts {
  uint64_t seed = 0;
  int restarts = 32;
  int members = 0;
  double tol = 1e-9;
  std::string base_str = "2";
  std::string format = "json";
  std::string out_path;
};

double log_base(const CommonOpts& o) { return o.base_str == "e" ? std::exp(1.0) : 2.0; }

RoofOptions roof_options(const CommonOpts& o) {
  RoofOptions opts;
  opts.seed = o.seed;
  opts.restarts = o.restarts;
  opts.members = o.members;
  opts.tol = o.tol;
  return opts;
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "output format, json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out_path, "output file path, default stdout");
}

void add_roof_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--restarts", o.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--members", o.members, "decomposition members, 0 means rank squared")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", o.tol, "sweep convergence tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--base", o.base_str, "entropy log base, 2 or e")
      ->check(CLI::IsMember({"2", "e"}));
  add_output_flags(cmd, o);
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

void deliver(const std::string& text, const CommonOpts& o, std::ostream& out) {
  if (o.out_path.empty())
    out << text;
  else
    write_text(o.out_path, text);
}

void emit_json(const Json& j, const CommonOpts& o, std::ostream& out) {
  deliver(pretty_json(j), o, out);
}

void require_json_format(const CommonOpts& o, const std::string& what) {
  if (o.format != "json")
    throw ValidationError(what + " emits an ensemble and supports only --format json");
}

Json roof_report(const RoofResult& r) {
  Json j;
  j["value"] = round12(r.value);
  j["bound_direction"] = r.bound == BoundDirection::upper ? "upper" : "lower";
  j["restarts"] = r.restarts;
  j["seed"] = r.seed;
  j["converged"] = r.converged;
  j["ensemble"] = ensemble_to_json(r.ensemble);
  return j;
}

void emit_roof(const RoofResult& r, const CommonOpts& o, std::ostream& out) {
  if (o.format == "csv") {
    std::ostringstream ss;
    ss << "value,bound_direction,restarts,seed,converged\n";
    ss << fmt12(r.value) << ',' << (r.bound == BoundDirection::upper ? "upper" : "lower") << ','
       << r.restarts << ',' << r.seed << ',' << (r.converged ? "true" : "false") << '\n';
    deliver(ss.str(), o, out);
  } else {
    emit_json(roof_report(r), o, out);
  }
}

std::pair<int, int> require_dims(const LoadedState& ls, const std::string& who) {
  if (!ls.dims)
    throw ValidationError(who + " needs a bipartite state file with a \"dims\" field");
  return *ls.dims;
}

int strict_int(const std::string& s, const std::string& what) {
  size_t idx = 0;
  int v = 0;
  try {
    v = std::stoi(s, &idx);
  } catch (const std::exception&) {
    throw ValidationError(what + " must be an integer");
  }
  if (idx != s.size()) throw ValidationError(what + " must be an integer");
  return v;
}

Matrix load_projector(const std::string& path) {
  const Json j = load_json(path);
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
    throw ValidationError("projector file needs \"dim\" and \"matrix\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    throw ValidationError("projector file: \"dim\" must be a positive integer");
  const int d = j["dim"].get<int>();
  Matrix rows(d, d);
  {
    const Json& m = j["matrix"];
    if (!m.is_array() || static_cast<int>(m.size()) != d)
      throw ValidationError("projector file: matrix must be dim x dim");
    for (int i = 0; i < d; ++i) {
      if (!m[i].is_array() || static_cast<int>(m[i].size()) != d)
        throw ValidationError("projector file: matrix must be dim x dim");
      for (int k = 0; k < d; ++k) {
        const Json& e = m[i][k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw ValidationError("projector file: entries must be [re, im] pairs");
        rows(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  if (!rows.is_hermitian(1e-10)) throw ValidationError("projector must be Hermitian");
  if (max_abs_diff(rows * rows, rows) > 1e-8)
    throw ValidationError("projector must be idempotent within 1e-8");
  return rows;
}

CharFnParams char_params(CharFnCase kind, const std::string& params_path, int k) {
  CharFnParams p;
  p.kind = kind;
  switch (kind) {
    case CharFnCase::pure_set: {
      if (params_path.empty())
        throw ValidationError("case \"set\" needs --params with a pure-state ensemble file");
      Ensemble e = load_ensemble(params_path);
      if (!is_pure_ensemble(e))
        throw ValidationError("--params for case \"set\" must list pure states");
      p.pure_set = std::move(e.atoms);
      break;
    }
    case CharFnCase::face: {
      if (params_path.empty())
        throw ValidationError("case \"face\" needs --params with a projector file");
      p.projector = load_projector(params_path);
      break;
    }
    case CharFnCase::rank:
      if (k < 1) throw ValidationError("case \"rank\" needs --k at least 1");
      p.k = k;
      break;
  }
  return p;
}

StateFunctional functional_from_selector(const std::string& sel, const LoadedState& ls,
                                         const std::string& params_path, int k, double base) {
  if (sel == "entropyA") {
    const auto [dA, dB] = require_dims(ls, "selector \"entropyA\"");
    return make_entropy_a(dA, dB, base);
  }
  if (sel.rfind("hn:", 0) == 0) {
    const int n = strict_int(sel.substr(3), "selector \"hn\" suffix");
    const auto [dA, dB] = require_dims(ls, "selector \"hn\"");
    return make_truncated_entropy(dA, dB, n, base);
  }
  if (sel.rfind("kyfan:", 0) == 0) {
    const int n = strict_int(sel.substr(6), "selector \"kyfan\" suffix");
    return make_ky_fan(n);
  }
  if (sel == "purity-gap") return make_purity_gap();
  if (sel.rfind("charfn:", 0) == 0) {
    const std::string rest = sel.substr(7);
    const size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw ValidationError("selector \"charfn\" needs the form charfn:<case>:<n>");
    const std::string case_name = rest.substr(0, colon);
    const int n = strict_int(rest.substr(colon + 1), "selector \"charfn\" suffix");
    CharFnCase kind;
    if (case_name == "set")
      kind = CharFnCase::pure_set;
    else if (case_name == "face")
      kind = CharFnCase::face;
    else if (case_name == "rank")
      kind = CharFnCase::rank;
    else
      throw ValidationError("charfn case must be set, face or rank");
    return make_char_fn(char_params(kind, params_path, k), n);
  }
  if (sel.rfind("channel:", 0) == 0) {
    const std::string path = sel.substr(8);
    if (path.empty()) throw ValidationError("selector \"channel\" needs a kraus file path");
    return make_channel_entropy(load_channel(path), base);
  }
  throw ValidationError("unknown functional selector: " + sel);
}

Json witness_to_json(const ConvexWitness& w) {
  Json j;
  Json slopes = Json::array();
  for (const Matrix& m : w.slopes) slopes.push_back(matrix_to_json(m));
  j["slopes"] = std::move(slopes);
  Json offsets = Json::array();
  for (double x : w.offsets) offsets.push_back(round12(x));
  j["offsets"] = std::move(offsets);
  j["mu_average"] = round12(w.mu_average);
  j["nu_average"] = round12(w.nu_average);
  return j;
}

std::vector<double> parse_deltas(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t idx = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &idx);
    } catch (const std::exception&) {
      throw ValidationError("--deltas entries must be numbers");
    }
    if (idx != item.size()) throw ValidationError("--deltas entries must be numbers");
    if (!(v > 0.0 && v <= 1.0))
      throw ValidationError("--deltas entries must lie in (0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("--deltas must list at least one value");
  return out;
}

/// Hull value of the purity functional over the fixed one-parameter family
/// (1-lambda)|k><k| + lambda I/2 on a qubit, used by the remark1 demo.
double remark1_value(double lambda) {
  Matrix eye = Matrix::identity(2);
  eye *= 0.5;
  const DensityMatrix half = DensityMatrix::unchecked(std::move(eye));
  double value = 0.0;
  for (int k = 0; k < 2; ++k) {
    Matrix atom(2, 2);
    atom(k, k) = 1.0 - lambda;
    Matrix part = half.matrix();
    part *= lambda;
    atom += part;
    value += 0.5 * purity_gap(DensityMatrix::unchecked(std::move(atom)));
  }
  return value;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex roofs, concave hulls and the Choquet order on state ensembles"};
  app.require_subcommand(1);
  int exit_code = 0;

  // eof
  CommonOpts eof_o;
  std::string eof_path;
  auto* eof_cmd = app.add_subcommand("eof", "Entanglement of formation of a bipartite state");
  eof_cmd->add_option("state", eof_path, "state JSON file with dims")->required();
  add_roof_flags(eof_cmd, eof_o);
  eof_cmd->callback([&]() {
    const LoadedState ls = load_state(eof_path);
    const auto [dA, dB] = require_dims(ls, "eof");
    emit_roof(eof(ls.state, dA, dB, log_base(eof_o), roof_options(eof_o)), eof_o, out);
  });

  // efn
  CommonOpts efn_o;
  std::string efn_path;
  int efn_n = 0;
  auto* efn_cmd =
      app.add_subcommand("efn", "Convex roof of the truncated entropy of a bipartite state");
  efn_cmd->add_option("state", efn_path, "state JSON file with dims")->required();
  efn_cmd->add_option("--n", efn_n, "truncation level, at least 2")->required();
  add_roof_flags(efn_cmd, efn_o);
  efn_cmd->callback([&]() {
    const LoadedState ls = load_state(efn_path);
    const auto [dA, dB] = require_dims(ls, "efn");
    emit_roof(efn(ls.state, dA, dB, efn_n, log_base(efn_o), roof_options(efn_o)), efn_o, out);
  });

  // roof / hat
  CommonOpts roof_o;
  std::string roof_path, roof_sel, roof_params;
  int roof_k = 1;
  auto* roof_cmd = app.add_subcommand("roof", "Convex roof of a selected functional");
  roof_cmd->add_option("state", roof_path, "state JSON file")->required();
  roof_cmd->add_option("--fn", roof_sel, "functional selector")->required();
  roof_cmd->add_option("--params", roof_params, "parameter file for charfn set/face");
  roof_cmd->add_option("--k", roof_k, "rank parameter for charfn:rank");
  add_roof_flags(roof_cmd, roof_o);
  roof_cmd->callback([&]() {
    const LoadedState ls = load_state(roof_path);
    const StateFunctional f =
        functional_from_selector(roof_sel, ls, roof_params, roof_k, log_base(roof_o));
    emit_roof(convex_roof(f, ls.state, roof_options(roof_o)), roof_o, out);
  });

  CommonOpts hat_o;
  std::string hat_path, hat_sel, hat_params;
  int hat_k = 1;
  auto* hat_cmd = app.add_subcommand("hat", "Concave hull of a selected functional");
  hat_cmd->add_option("state", hat_path, "state JSON file")->required();
  hat_cmd->add_option("--fn", hat_sel, "functional selector")->required();
  hat_cmd->add_option("--params", hat_params, "parameter file for charfn set/face");
  hat_cmd->add_option("--k", hat_k, "rank parameter for charfn:rank");
  add_roof_flags(hat_cmd, hat_o);
  hat_cmd->callback([&]() {
    const LoadedState ls = load_state(hat_path);
    const StateFunctional f =
        functional_from_selector(hat_sel, ls, hat_params, hat_k, log_base(hat_o));
    emit_roof(concave_hull(f, ls.state, roof_options(hat_o)), hat_o, out);
  });

  // order
  CommonOpts order_o;
  std::string order_mu, order_nu;
  auto* order_cmd =
      app.add_subcommand("order", "Choquet-order test: does the first ensemble dominate?");
  order_cmd->add_option("mu", order_mu, "candidate dominating ensemble JSON file")->required();
  order_cmd->add_option("nu", order_nu, "candidate dominated ensemble JSON file")->required();
  add_output_flags(order_cmd, order_o);
  order_cmd->callback([&]() {
    const Ensemble mu = load_ensemble(order_mu);
    const Ensemble nu = load_ensemble(order_nu);
    const OrderVerdict verdict = check_dominates(mu, nu);
    if (order_o.format == "csv") {
      std::string status;
      switch (verdict.status) {
        case OrderStatus::dominates: status = "dominates"; break;
        case OrderStatus::not_dominates: status = "not-dominates"; break;
        case OrderStatus::ambiguous: status = "ambiguous"; break;
      }
      deliver("status\n" + status + "\n", order_o, out);
    } else {
      Json j;
      switch (verdict.status) {
        case OrderStatus::dominates:
          j["status"] = "dominates";
          j["plan"] = plan_to_json(*verdict.plan);
          break;
        case OrderStatus::not_dominates:
          j["status"] = "not-dominates";
          if (verdict.violation) j["witness"] = witness_to_json(*verdict.violation);
          break;
        case OrderStatus::ambiguous:
          j["status"] = "ambiguous";
          break;
      }
      emit_json(j, order_o, out);
    }
    if (verdict.status == OrderStatus::not_dominates) exit_code = 1;
    if (verdict.status == OrderStatus::ambiguous) exit_code = 3;
  });

  // refine
  CommonOpts refine_o;
  std::string refine_path;
  auto* refine_cmd =
      app.add_subcommand("refine", "Refine an ensemble to pure atoms, preserving the barycenter");
  refine_cmd->add_option("mu", refine_path, "ensemble JSON file")->required();
  add_output_flags(refine_cmd, refine_o);
  refine_cmd->callback([&]() {
    require_json_format(refine_o, "refine");
    emit_json(ensemble_to_json(refine_to_pure(load_ensemble(refine_path))), refine_o, out);
  });

  // steer
  CommonOpts steer_o;
  std::string steer_mu, steer_target;
  auto* steer_cmd =
      app.add_subcommand("steer", "Steer an ensemble's barycenter exactly onto a target state");
  steer_cmd->add_option("mu", steer_mu, "ensemble JSON file")->required();
  steer_cmd->add_option("target", steer_target, "target state JSON file")->required();
  add_output_flags(steer_cmd, steer_o);
  steer_cmd->callback([&]() {
    require_json_format(steer_o, "steer");
    const Ensemble mu = load_ensemble(steer_mu);
    const LoadedState target = load_state(steer_target);
    const SteerResult sr = steer_barycenter(mu, target.state);
    Json j = ensemble_to_json(sr.ensemble);
    j["epsilon"] = round12(sr.epsilon);
    emit_json(j, steer_o, out);
  });

  // approx
  CommonOpts approx_o;
  std::string approx_path, approx_case, approx_params;
  int approx_n = 0, approx_k = 1;
  auto* approx_cmd =
      app.add_subcommand("approx", "Characteristic-function approximator f_n with a 1..n sweep");
  approx_cmd->add_option("state", approx_path, "state JSON file")->required();
  approx_cmd->add_option("--case", approx_case, "which set: set, face or rank")
      ->required()
      ->check(CLI::IsMember({"set", "face", "rank"}));
  approx_cmd->add_option("--n", approx_n, "approximation order, at least 1")
      ->required()
      ->check(CLI::PositiveNumber);
  approx_cmd->add_option("--params", approx_params, "parameter file for set/face");
  approx_cmd->add_option("--k", approx_k, "rank parameter for case rank");
  add_output_flags(approx_cmd, approx_o);
  approx_cmd->callback([&]() {
    const LoadedState ls = load_state(approx_path);
    CharFnCase kind = CharFnCase::rank;
    if (approx_case == "set") kind = CharFnCase::pure_set;
    if (approx_case == "face") kind = CharFnCase::face;
    const CharFnParams params = char_params(kind, approx_params, approx_k);
    std::vector<double> sweep(approx_n);
    for (int n = 1; n <= approx_n; ++n) sweep[n - 1] = approx_char_fn(params, n, ls.state);
    if (approx_o.format == "csv") {
      std::ostringstream ss;
      ss << "n,value\n";
      for (int n = 1; n <= approx_n; ++n) ss << n << ',' << fmt12(sweep[n - 1]) << '\n';
      deliver(ss.str(), approx_o, out);
    } else {
      Json j;
      j["case"] = approx_case;
      j["n"] = approx_n;
      j["value"] = round12(sweep.back());
      Json rows = Json::array();
      for (int n = 1; n <= approx_n; ++n)
        rows.push_back(Json::array({n, round12(sweep[n - 1])}));
      j["sweep"] = std::move(rows);
      emit_json(j, approx_o, out);
    }
  });

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Small reproducible demonstrations");
  demo_cmd->require_subcommand(1);

  CommonOpts remark_o;
  std::string remark_deltas = "0.1,0.01,0.001";
  auto* remark_cmd = demo_cmd->add_subcommand(
      "remark1", "Hull values along a family whose supremum is approached but never attained");
  remark_cmd->add_option("--deltas", remark_deltas, "comma-separated lambda values in (0, 1]");
  add_output_flags(remark_cmd, remark_o);
  remark_cmd->callback([&]() {
    const std::vector<double> deltas = parse_deltas(remark_deltas);
    if (remark_o.format == "csv") {
      std::ostringstream ss;
      ss << "lambda,value\n";
      for (double lam : deltas) ss << fmt12(lam) << ',' << fmt12(remark1_value(lam)) << '\n';
      deliver(ss.str(), remark_o, out);
    } else {
      Json rows = Json::array();
      for (double lam : deltas) {
        Json row;
        row["lambda"] = round12(lam);
        row["value"] = round12(remark1_value(lam));
        rows.push_back(std::move(row));
      }
      Json j;
      j["rows"] = std::move(rows);
      emit_json(j, remark_o, out);
    }
  });

  CommonOpts sweep_o;
  std::string sweep_path;
  int sweep_max = 0;
  auto* sweep_cmd = demo_cmd->add_subcommand("efn-sweep",
                                             "Truncated-entropy roof for n = 2..max-n");
  sweep_cmd->add_option("state", sweep_path, "state JSON file with dims")->required();
  sweep_cmd->add_option("--max-n", sweep_max, "largest truncation level, at least 2")->required();
  add_roof_flags(sweep_cmd, sweep_o);
  sweep_cmd->callback([&]() {
    if (sweep_max < 2) throw ValidationError("--max-n must be at least 2");
    const LoadedState ls = load_state(sweep_path);
    const auto [dA, dB] = require_dims(ls, "efn-sweep");
    std::vector<double> values;
    for (int n = 2; n <= sweep_max; ++n)
      values.push_back(
          efn(ls.state, dA, dB, n, log_base(sweep_o), roof_options(sweep_o)).value);
    if (sweep_o.format == "csv") {
      std::ostringstream ss;
      ss << "n,value\n";
      for (int n = 2; n <= sweep_max; ++n) ss << n << ',' << fmt12(values[n - 2]) << '\n';
      deliver(ss.str(), sweep_o, out);
    } else {
      Json rows = Json::array();
      for (int n = 2; n <= sweep_max; ++n) {
        Json row;
        row["n"] = n;
        row["value"] = round12(values[n - 2]);
        rows.push_back(std::move(row));
      }
      Json j;
      j["rows"] = std::move(rows);
      emit_json(j, sweep_o, out);
    }
  });

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form reference values");
  oracle_cmd->require_subcommand(1);

  CommonOpts woot_o;
  std::string woot_path;
  auto* woot_cmd =
      oracle_cmd->add_subcommand("wootters", "Two-qubit entanglement of formation, closed form");
  woot_cmd->add_option("state", woot_path, "two-qubit state JSON file")->required();
  woot_cmd->add_option("--base", woot_o.base_str, "entropy log base, 2 or e")
      ->check(CLI::IsMember({"2", "e"}));
  add_output_flags(woot_cmd, woot_o);
  woot_cmd->callback([&]() {
    const LoadedState ls = load_state(woot_path);
    if (ls.dims && !(ls.dims->first == 2 && ls.dims->second == 2))
      throw ValidationError("wootters oracle needs dims [2, 2]");
    const double c = concurrence(ls.state);
    const double v = wootters_eof(ls.state, log_base(woot_o));
    if (woot_o.format == "csv") {
      deliver("value,concurrence\n" + fmt12(v) + "," + fmt12(c) + "\n", woot_o, out);
    } else {
      Json j;
      j["value"] = round12(v);
      j["concurrence"] = round12(c);
      emit_json(j, woot_o, out);
    }
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  return exit_code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const UnsupportedInputError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace choqroof
