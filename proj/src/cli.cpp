#include "ade/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ade/classify.hpp"
#include "ade/mfact.hpp"
#include "ade/split.hpp"
#include "ade/textio.hpp"

namespace ade {

namespace {

using Json = nlohmann::ordered_json;
constexpr const char* kSchema = "ade-cert/1";

struct Options {
  std::string command;
  std::string field = "q";
  int precision = 16;
  std::string vars;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::string polynomial;
  std::string input_file;
  std::string batch_file;
  std::string cert_file;
  std::string mf_file;
  std::string verdict;
  std::string var;
  bool assume_closed = false;
};

struct Outcome {
  Json report;
  int code;  // 0, 1 or 2
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json error_report(const Options& o, ErrorCode code, const std::string& message, std::optional<std::size_t> loc) {
  Json j;
  j["schema"] = kSchema;
  if (!o.command.empty()) j["command"] = o.command;
  j["error"] = std::string(code_name(code));
  j["message"] = message;
  if (loc) j["location"] = *loc;
  return j;
}

Json header(const Options& o, const FieldSpec& spec, int N, const std::vector<std::string>& vars) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = o.command;
  j["field"] = spec.name();
  j["precision"] = N;
  j["vars"] = vars;
  if (o.seed) j["seed"] = *o.seed;
  return j;
}

std::vector<std::string> choose_vars(const Options& o, const std::string& text) {
  if (!o.vars.empty()) return parse_variable_list(o.vars);
  auto v = detect_variables(text);
  if (v.empty()) v.push_back("x");
  if (static_cast<int>(v.size()) > Monomial::kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "at most 15 variables are supported");
  return v;
}

template <class F>
std::vector<std::string> render_all(const std::vector<Series<F>>& s, const std::vector<std::string>& vars) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(render(x, vars));
  return out;
}

template <class F>
Json matrix_json(const SeriesMatrix<F>& m, const std::vector<std::string>& vars) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(render(m(i, j), vars));
    rows.push_back(row);
  }
  return rows;
}

template <class F>
Json mf_json(const MatrixFactorization<F>& mf, const std::vector<std::string>& vars) {
  Json j;
  j["equation"] = render(mf.equation, vars);
  j["phi"] = matrix_json(mf.phi, vars);
  j["psi"] = matrix_json(mf.psi, vars);
  j["verified"] = verify_mf(mf);
  return j;
}

template <class F>
Series<F> parse_exact(const std::string& text, const std::vector<std::string>& vars, const FieldOf<F>& K, int N) {
  auto p = parse_polynomial<F>(text, vars, K, N);
  if (p.dropped_terms) throw Error(ErrorCode::PrecisionOutOfRange, "stored polynomial exceeds the precision");
  return p.series;
}

template <class F>
SeriesMatrix<F> matrix_from_json(const Json& rows, const std::vector<std::string>& vars, const FieldOf<F>& K, int N) {
  std::vector<std::vector<Series<F>>> out;
  for (const auto& row : rows) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(parse_exact<F>(e.get<std::string>(), vars, K, N));
  }
  return SeriesMatrix<F>::from_rows(std::move(out));
}

template <class F>
MatrixFactorization<F> mf_from_json(const Json& j, const std::vector<std::string>& vars, const FieldOf<F>& K, int N) {
  return {parse_exact<F>(j.at("equation").get<std::string>(), vars, K, N), matrix_from_json<F>(j.at("phi"), vars, K, N),
          matrix_from_json<F>(j.at("psi"), vars, K, N)};
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "malformed JSON in '" + path + "': " + e.what());
  }
}

Json warnings_for(int dropped, int N) {
  Json w = Json::array();
  if (dropped == 1) w.push_back("dropped 1 term of degree above " + std::to_string(N));
  if (dropped > 1) w.push_back("dropped " + std::to_string(dropped) + " terms of degree above " + std::to_string(N));
  return w;
}

// ------------------------------------------------------------- commands

template <class F>
Outcome classify_one(const Options& o, const FieldSpec& spec, const FieldOf<F>& K, const std::string& text) {
  auto vars = choose_vars(o, text);
  auto parsed = parse_polynomial<F>(text, vars, K, o.precision);
  ClassifyOptions copt;
  copt.algebraically_closed_assumed = o.assume_closed || spec.algebraically_closed_assumed;
  auto c = classify(parsed.series, copt);
  Json j = header(o, spec, o.precision, vars);
  j["input"] = text;
  j["verdict"] = c.verdict.name();
  if (!c.verdict.reason.empty()) j["reason"] = c.verdict.reason;
  if (c.certificate) {
    Json cert;
    cert["verdict"] = c.certificate->verdict.name();
    cert["normal_form"] = render(c.certificate->normal_form, vars);
    cert["change"] = render_all(c.certificate->change.components(), vars);
    cert["unit"] = render(c.certificate->unit.unit(), vars);
    cert["precision"] = c.certificate->precision;
    j["certificate"] = cert;
  } else {
    j["certificate"] = nullptr;
  }
  j["warnings"] = warnings_for(parsed.dropped_terms, o.precision);
  return {j, c.verdict.kind == VerdictKind::Undetermined ? 2 : 0};
}

template <class F>
Outcome split_one(const Options& o, const FieldSpec& spec, const FieldOf<F>& K, const std::string& text) {
  auto vars = choose_vars(o, text);
  auto parsed = parse_polynomial<F>(text, vars, K, o.precision);
  auto s = split(parsed.series);
  Json j = header(o, spec, o.precision, vars);
  j["input"] = text;
  j["rank"] = s.rank;
  j["corank"] = static_cast<int>(vars.size()) - s.rank;
  Json units = Json::array();
  for (const auto& u : s.units) units.push_back(format_scalar(u));
  j["units"] = units;
  j["change"] = render_all(s.change.components(), vars);
  j["residual"] = render(s.residual, vars);
  j["warnings"] = warnings_for(parsed.dropped_terms, o.precision);
  return {j, 0};
}

template <class F>
Outcome verify_cert(const Options& o, const FieldSpec& spec, const FieldOf<F>& K, const Json& doc,
                    const std::string& text) {
  int N = doc.value("precision", o.precision);
  std::vector<std::string> vars = doc.contains("vars") ? doc.at("vars").get<std::vector<std::string>>()
                                                       : choose_vars(o, text);
  const Json& cj = doc.contains("certificate") ? doc.at("certificate") : doc;
  if (cj.is_null()) throw Error(ErrorCode::CertificateMismatch, "certificate mismatch: no certificate stored");
  auto f = parse_polynomial<F>(text, vars, K, N).series;
  Verdict v = Verdict::parse(cj.at("verdict").get<std::string>());
  int cN = cj.value("precision", N);
  Series<F> nf = parse_exact<F>(cj.at("normal_form").get<std::string>(), vars, K, cN);
  std::vector<Series<F>> change;
  for (const auto& c : cj.at("change")) change.push_back(parse_exact<F>(c.get<std::string>(), vars, K, cN));
  Series<F> unit = parse_exact<F>(cj.at("unit").get<std::string>(), vars, K, cN);
  bool ok = static_cast<int>(change.size()) == static_cast<int>(vars.size()) &&
            nf == normal_form<F>(v, K, static_cast<int>(vars.size()), cN) && is_unit(unit);
  if (ok) {
    try {
      Certificate<F> cert{v, nf, CoordinateChange<F>(change), UnitWitness<F>(unit), cN};
      ok = verify_certificate(f, cert);
    } catch (const Error&) {
      ok = false;
    }
  }
  if (!ok) throw Error(ErrorCode::CertificateMismatch, "certificate mismatch");
  Json j = header(o, spec, N, vars);
  j["input"] = text;
  j["verdict"] = v.name();
  j["valid"] = true;
  return {j, 0};
}

template <class F>
Outcome mf_command(const Options& o, const FieldSpec& spec, const FieldOf<F>& K) {
  if (o.command == "mf-build") {
    if (o.verdict.empty()) throw Error(ErrorCode::InvalidArgument, "mf-build needs --verdict");
    auto vars = o.vars.empty() ? std::vector<std::string>{"x", "y"} : parse_variable_list(o.vars);
    auto mf = standard_mf<F>(Verdict::parse(o.verdict), static_cast<int>(vars.size()), K, o.precision);
    Json j = header(o, spec, o.precision, vars);
    j["verdict"] = o.verdict;
    Json body = mf_json(mf, vars);
    for (auto& [k, v] : body.items()) j[k] = v;
    return {j, 0};
  }
  if (o.mf_file.empty()) throw Error(ErrorCode::InvalidArgument, o.command + " needs --mf");
  Json doc = load_json(o.mf_file);
  int N = doc.value("precision", o.precision);
  auto vars = doc.at("vars").get<std::vector<std::string>>();
  auto mf = mf_from_json<F>(doc, vars, K, N);
  if (o.command == "mf-verify") {
    Json j = header(o, spec, N, vars);
    bool ok = verify_mf(mf);
    j["verified"] = ok;
    return {j, ok ? 0 : 1};
  }
  if (o.var.empty()) throw Error(ErrorCode::InvalidArgument, o.command + " needs --var");
  auto it = std::find(vars.begin(), vars.end(), o.var);
  if (it == vars.end()) {
    if (o.command == "mf-flat") throw Error(ErrorCode::UnknownVariable, "unknown variable '" + o.var + "'");
    // a fresh variable for the doubling: re-read the matrices with it appended
    vars.push_back(parse_variable_list(o.var).front());
    mf = mf_from_json<F>(doc, vars, K, N);
    it = vars.end() - 1;
  }
  int b = static_cast<int>(it - vars.begin());
  Json j = header(o, spec, N, vars);
  if (o.command == "mf-sharp") {
    Json body = mf_json(knorrer_sharp(mf, b), vars);
    for (auto& [k, v] : body.items()) j[k] = v;
    return {j, 0};
  }
  auto flat = knorrer_flat(mf, b);
  j["whole"] = mf_json(flat.whole, vars);
  if (flat.parts) {
    j["parts"] = Json::array({mf_json(flat.parts->first, vars), mf_json(flat.parts->second, vars)});
  } else {
    j["parts"] = nullptr;
  }
  return {j, 0};
}

template <class F>
Outcome run_single(const Options& o, const FieldSpec& spec, const FieldOf<F>& K, const std::string& text) {
  if (o.command == "classify") return classify_one<F>(o, spec, K, text);
  if (o.command == "split") return split_one<F>(o, spec, K, text);
  if (o.command == "verify") {
    if (o.cert_file.empty()) throw Error(ErrorCode::InvalidArgument, "verify needs --cert");
    Json doc = load_json(o.cert_file);
    std::string poly = text.empty() && doc.contains("input") ? doc.at("input").get<std::string>() : text;
    return verify_cert<F>(o, spec, K, doc, poly);
  }
  return mf_command<F>(o, spec, K);
}

Outcome guarded(const Options& o, const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {error_report(o, e.code(), e.what(), e.location()), 1};
  } catch (const nlohmann::json::exception& e) {
    return {error_report(o, ErrorCode::Io, std::string("malformed input JSON: ") + e.what(), std::nullopt), 1};
  }
}

std::string text_report(const Json& j) {
  std::ostringstream out;
  if (j.contains("error")) {
    out << "error: " << j["error"].get<std::string>() << ": " << j["message"].get<std::string>() << "\n";
    return out.str();
  }
  for (const auto& [k, v] : j.items()) {
    if (k == "schema") continue;
    if (v.is_string())
      out << k << ": " << v.get<std::string>() << "\n";
    else if (k == "certificate" && v.is_object()) {
      out << "certificate:\n";
      for (const auto& [ck, cv] : v.items()) out << "  " << ck << ": " << (cv.is_string() ? cv.get<std::string>() : cv.dump()) << "\n";
    } else
      out << k << ": " << v.dump() << "\n";
  }
  return out.str();
}

template <class F>
int dispatch(const Options& o, const FieldSpec& spec, const FieldOf<F>& K, std::ostream& out) {
  auto emit = [&](const Json& j, bool compact) {
    if (o.format == "text")
      out << text_report(j);
    else
      out << (compact ? j.dump() : j.dump(2)) << "\n";
  };
  if (!o.batch_file.empty()) {
    if (o.command != "classify" && o.command != "split")
      throw Error(ErrorCode::InvalidArgument, "batch mode supports classify and split");
    std::vector<std::string> lines;
    {
      std::istringstream in(read_file(o.batch_file));
      std::string line;
      while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
    }
    std::vector<Outcome> results(lines.size());
    const int count = static_cast<int>(lines.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i)
    {
      results[i] = guarded(o, [&] { return run_single<F>(o, spec, K, lines[i]); });
      if (results[i].report.contains("error")) results[i].report["input"] = lines[i];
    }
    int code = 0;
    for (const auto& r : results) {
      emit(r.report, true);
      if (r.code == 1) code = 1;
      if (r.code == 2 && code == 0) code = 2;
    }
    return code;
  }
  std::string text = o.polynomial;
  if (!o.input_file.empty()) {
    text = read_file(o.input_file);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  }
  bool needs_poly = o.command == "classify" || o.command == "split";
  if (needs_poly && text.empty()) throw Error(ErrorCode::InvalidArgument, o.command + " needs a polynomial");
  Outcome r = guarded(o, [&] { return run_single<F>(o, spec, K, text); });
  emit(r.report, false);
  return r.code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
  Options o;
  CLI::App app{"Exact ADE classification of hypersurface singularities"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--field", o.field, "q or fp:<p>");
    sub->add_option("--precision", o.precision, "work modulo m^(N+1)");
    sub->add_option("--vars", o.vars, "comma separated variable names");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--seed", o.seed, "recorded in the report");
  };
  struct Sub {
    const char* name;
    const char* help;
  };
  for (Sub s : {Sub{"classify", "classify a singularity and emit a certificate"},
                Sub{"split", "splitting lemma: squares plus residual"},
                Sub{"verify", "re-check a stored certificate"},
                Sub{"mf-build", "standard matrix factorization of a table form"},
                Sub{"mf-sharp", "Knorrer doubling in a fresh variable"},
                Sub{"mf-flat", "set a variable to zero and split the blocks"},
                Sub{"mf-verify", "check a stored matrix factorization"}}) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    std::string name = s.name;
    sub->callback([&o, name] { o.command = name; });
    if (name == "classify" || name == "split" || name == "verify") {
      sub->add_option("polynomial", o.polynomial, "polynomial text");
      sub->add_option("--input", o.input_file, "read the polynomial from a file");
    }
    if (name == "classify" || name == "split") sub->add_option("--batch", o.batch_file, "one polynomial per line");
    if (name == "classify") sub->add_flag("--assume-closed", o.assume_closed, "assume an algebraically closed field");
    if (name == "verify") sub->add_option("--cert", o.cert_file, "certificate JSON from classify");
    if (name == "mf-build") sub->add_option("--verdict", o.verdict, "table row, e.g. E6 or A3");
    if (name.rfind("mf-", 0) == 0 && name != "mf-build") sub->add_option("--mf", o.mf_file, "factorization JSON");
    if (name == "mf-sharp" || name == "mf-flat") sub->add_option("--var", o.var, "variable b");
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_report(o, ErrorCode::InvalidArgument, e.what(), std::nullopt).dump(2) << "\n";
    return 1;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->parsed()) o.command = sub->get_name();
  try {
    FieldSpec spec = FieldSpec::parse(o.field);
    if (o.precision < 0 || o.precision > Monomial::kMaxDegree / 2)
      throw Error(ErrorCode::PrecisionOutOfRange, "precision must be in 0..63");
    if (o.command == "classify" && o.precision < 3)
      throw Error(ErrorCode::PrecisionOutOfRange, "classify needs precision >= 3");
    if (spec.characteristic == 0) return dispatch<Rational>(o, spec, RationalField(), out);
    return dispatch<Fp>(o, spec, PrimeField(spec.characteristic), out);
  } catch (const Error& e) {
    Json j = error_report(o, e.code(), e.what(), e.location());
    if (o.format == "text")
      out << text_report(j);
    else
      out << j.dump(2) << "\n";
    return 1;
  }
}

}  // namespace ade
