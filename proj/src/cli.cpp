#include "cayley/cli.hpp"

#include "cayley/acceptance.hpp"
#include "cayley/ball.hpp"
#include "cayley/constants.hpp"
#include "cayley/error.hpp"
#include "cayley/folner.hpp"
#include "cayley/group.hpp"
#include "cayley/isoperimetry.hpp"
#include "cayley/numeric.hpp"
#include "cayley/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cayley::cli {

namespace {

struct RunConfig {
  std::string group = "z:1";
  std::string format = "json";
  std::string output;
  unsigned threads = 1;
  std::size_t max_elements = BallOptions{}.max_elements;
  int radius = -1;
  std::string v = "0";
  std::string omega;
  std::string omega_file;
  std::string form;
  std::string alpha = "0";
  std::string epsilon = "1/2";
  std::string lemma = "all";
  int n = 1;
  int cap = 12;
  bool family = false;
  bool range = false;
  std::string c = "1";
  std::string rho = "0";
  std::int64_t s_size = -1;
  std::string direction;
  std::string scope = "all-subsets-of-B(2)";
  int horizon = 8;
};

/// A falsified check: the report was written, and the process exits with 2.
struct Falsified {
  std::string message;
};

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", cfg.output, "write the report to this file");
  sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1U, 1024U));
  sub->add_option("--max-elements", cfg.max_elements, "element budget for ball enumeration");
}

void add_group(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--group", cfg.group, "z:<d>, free:<rank>, dinf, heis or lamplighter")->required();
}

void add_omega(CLI::App* sub, RunConfig& cfg) {
  auto* range = sub->add_option("--omega", cfg.omega, "integer range a..b (z:1 only)");
  auto* file = sub->add_option("--omega-file", cfg.omega_file, "file of hex element keys, one per line");
  range->excludes(file);
}

BallOptions ball_options(const RunConfig& cfg) {
  BallOptions options;
  options.max_elements = cfg.max_elements;
  return options;
}

FiniteSubset read_omega(const Group& group, const RunConfig& cfg) {
  if (!cfg.omega.empty()) {
    if (group.kind() != GroupKind::ZPowerD || group.param() != 1) {
      throw Error(ErrorCode::Usage, "--omega ranges are only available for z:1; use --omega-file");
    }
    const auto dots = cfg.omega.find("..");
    if (dots == std::string::npos) throw Error(ErrorCode::Usage, "--omega expects a..b");
    auto parse = [&](std::string_view text) {
      std::int64_t value = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Usage, "bad integer in --omega: '" + std::string(text) + "'");
      }
      return value;
    };
    const std::string_view all(cfg.omega);
    const std::int64_t lo = parse(all.substr(0, dots));
    const std::int64_t hi = parse(all.substr(dots + 2));
    if (lo > hi) throw Error(ErrorCode::EmptySet, "--omega range is empty");
    return integer_interval(group, lo, hi);
  }
  if (!cfg.omega_file.empty()) {
    std::ifstream in(cfg.omega_file);
    if (!in) throw Error(ErrorCode::Usage, "cannot open " + cfg.omega_file);
    std::vector<Element> items;
    std::string line;
    while (std::getline(in, line)) {
      line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
                 line.end());
      if (line.empty() || line.front() == '#') continue;
      Element g = group.from_key(from_hex(line));
      group.check(g);
      items.push_back(std::move(g));
    }
    if (items.empty()) throw Error(ErrorCode::EmptySet, cfg.omega_file + " lists no elements");
    return FiniteSubset(group, std::move(items));
  }
  throw Error(ErrorCode::Usage, "give --omega or --omega-file");
}

nlohmann::json element_list(const FiniteSubset& set) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& g : set.elements()) list.push_back(set.group().format(g));
  return list;
}

std::string joined(const FiniteSubset& set) {
  std::string text = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) text += ", ";
    text += set.group().format(set.elements()[i]);
  }
  return text + "}";
}

void emit_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

void cmd_growth(const RunConfig& cfg, std::ostream& os) {
  if (cfg.radius < 0) throw Error(ErrorCode::Usage, "--radius is required");
  const BallTable table = enumerate_ball(parse_group(cfg.group), cfg.radius, ball_options(cfg));
  if (cfg.format == "csv") {
    write_csv(os, table);
  } else {
    emit_json(os, to_json(table));
  }
}

void cmd_phi(const RunConfig& cfg, std::ostream& os) {
  const Rational v = parse_rational(cfg.v);
  const int limit = cfg.radius < 0 ? 256 : cfg.radius;
  const BallTable table = enumerate_ball_beyond(parse_group(cfg.group), v, limit, ball_options(cfg));
  const PhiValue result = phi(table, v);
  if (cfg.format == "csv") {
    os << "v,phi\n" << to_string(v) << ',' << result.str() << '\n';
  } else {
    nlohmann::json j;
    j["group"] = cfg.group;
    j["v"] = to_string(v);
    j["phi"] = result.is_infinite() ? nlohmann::json("infinite") : nlohmann::json(result.radius());
    emit_json(os, j);
  }
}

void cmd_avg_length(const RunConfig& cfg, std::ostream& os) {
  if (cfg.radius < 0) throw Error(ErrorCode::Usage, "--radius is required");
  const BallTable table = enumerate_ball(parse_group(cfg.group), cfg.radius, ball_options(cfg));
  const Rational avg = average_length(table, cfg.radius);
  if (cfg.format == "csv") {
    os << "r,b_r,length_sum_r,avg_len_num,avg_len_den\n"
       << cfg.radius << ',' << to_string(table.b(cfg.radius)) << ',' << to_string(table.length_sum(cfg.radius))
       << ',' << to_string(numerator_of(avg)) << ',' << to_string(denominator_of(avg)) << '\n';
  } else {
    nlohmann::json j;
    j["group"] = cfg.group;
    j["r"] = cfg.radius;
    j["b_r"] = to_json(table.b(cfg.radius));
    j["length_sum_r"] = to_json(table.length_sum(cfg.radius));
    j["avg_length"] = to_string(avg);
    emit_json(os, j);
  }
}

void cmd_boundary(const RunConfig& cfg, std::ostream& os) {
  const FiniteSubset omega = read_omega(parse_group(cfg.group), cfg);
  const FiniteSubset edge = boundary(omega);
  if (cfg.format == "csv") {
    os << "size,boundary_size,ratio\n"
       << omega.size() << ',' << edge.size() << ',' << to_string(boundary_ratio(omega)) << '\n';
  } else {
    nlohmann::json j;
    j["group"] = cfg.group;
    j["size"] = omega.size();
    j["boundary_size"] = edge.size();
    j["ratio"] = to_string(boundary_ratio(omega));
    j["boundary"] = element_list(edge);
    emit_json(os, j);
  }
}

void cmd_check(const RunConfig& cfg, std::ostream& os) {
  const auto form = parse_form(cfg.form);
  if (!form) throw Error(ErrorCode::Usage, "unknown --form '" + cfg.form + "'");
  const Group group = parse_group(cfg.group);
  const FiniteSubset omega = read_omega(group, cfg);
  InequalityParams params{parse_rational(cfg.alpha), parse_rational(cfg.epsilon)};
  if (params.epsilon <= 0 || params.epsilon >= 1) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
  if (params.alpha < 0) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
  // Enough ball for every form's Phi argument.
  const Rational size(omega.size());
  const Rational volume =
      std::max({Rational((1 + params.alpha) * size), Rational(size / params.epsilon), Rational(2 * size)});
  const int limit = cfg.radius < 0 ? 4096 : cfg.radius;
  const BallTable table = enumerate_ball_beyond(group, volume, limit, ball_options(cfg));
  const InequalityReport report = check_inequality(omega, table, *form, params);
  if (cfg.format == "csv") {
    os << "form,lhs,rhs,holds,strict,radius_used\n"
       << to_string(report.form) << ',' << to_string(report.lhs) << ',' << to_string(report.rhs) << ','
       << (report.holds ? "true" : "false") << ',' << (report.strict ? "true" : "false") << ','
       << report.radius_used.str() << '\n';
  } else {
    nlohmann::json j = to_json(report);
    j["group"] = cfg.group;
    j["omega_size"] = omega.size();
    j["boundary_size"] = omega.boundary_size();
    emit_json(os, j);
  }
  if (!report.holds) throw Falsified{std::string(to_string(*form)) + " fails on omega = " + joined(omega)};
}

void cmd_transport(const RunConfig& cfg, std::ostream& os) {
  if (cfg.radius < 0) throw Error(ErrorCode::Usage, "--radius is required");
  const Group group = parse_group(cfg.group);
  const Rational alpha = parse_rational(cfg.alpha);
  std::vector<Lemma> lemmas;
  if (cfg.lemma == "all") {
    lemmas = {Lemma::Spheres, Lemma::Balls, Lemma::Transport, Lemma::Counting,
              Lemma::RayLower, Lemma::Conclude, Lemma::Fiber};
  } else {
    const auto which = parse_lemma(cfg.lemma);
    if (!which) throw Error(ErrorCode::Usage, "unknown --lemma '" + cfg.lemma + "'");
    lemmas = {*which};
  }
  const BallTable table = enumerate_ball(group, cfg.radius, ball_options(cfg));
  const bool needs_ledger = std::any_of(lemmas.begin(), lemmas.end(), [](Lemma l) {
    return l != Lemma::Spheres && l != Lemma::Balls;
  });
  std::optional<TransportLedger> ledger;
  if (needs_ledger) ledger = build_ledger(read_omega(group, cfg), table, cfg.radius);
  std::vector<LemmaReport> reports;
  for (const Lemma l : lemmas) {
    if (l == Lemma::Spheres || l == Lemma::Balls) {
      reports.push_back(verify_lemma(table, l));
    } else {
      reports.push_back(verify_lemma(*ledger, table, l, alpha));
    }
  }
  if (cfg.format == "csv") {
    os << "lemma,precondition_met,holds,witness\n";
    for (const auto& r : reports) {
      os << to_string(r.which) << ',' << (r.precondition_met ? "true" : "false") << ','
         << (r.holds ? "true" : "false") << ",\"" << r.witness << "\"\n";
    }
  } else if (ledger) {
    emit_json(os, summary_json(*ledger, reports));
  } else {
    nlohmann::json j;
    j["r"] = cfg.radius;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) {
      list.push_back({{"lemma", std::string(to_string(r.which))},
                      {"precondition_met", r.precondition_met},
                      {"holds", r.holds},
                      {"witness", r.witness}});
    }
    j["lemma_results"] = list;
    emit_json(os, j);
  }
  for (const auto& r : reports) {
    if (r.precondition_met && !r.holds) {
      throw Falsified{std::string(to_string(r.which)) + " fails: " + r.witness};
    }
  }
}

void cmd_folner(const RunConfig& cfg, std::ostream& os) {
  const Group group = parse_group(cfg.group);
  if (cfg.family) {
    const BigInt upper = folner_family_upper(group, cfg.n);
    const FiniteSubset member = folner_family_member(group, cfg.n);
    if (cfg.format == "csv") {
      os << "n,family_upper,boundary_size\n" << cfg.n << ',' << to_string(upper) << ',' << member.boundary_size()
         << '\n';
    } else {
      nlohmann::json j;
      j["group"] = cfg.group;
      j["n"] = cfg.n;
      j["family_upper"] = to_json(upper);
      j["boundary_size"] = member.boundary_size();
      emit_json(os, j);
    }
    return;
  }
  FolnerOptions options;
  options.threads = cfg.threads;
  options.ball = ball_options(cfg);
  std::vector<FolnerRecord> records = folner_records(group, cfg.n, cfg.cap, options);
  if (!cfg.range) records.erase(records.begin(), records.end() - 1);
  if (cfg.format == "csv") {
    write_csv(os, records);
  } else {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& rec : records) list.push_back(to_json(rec));
    emit_json(os, cfg.range ? list : list.front());
  }
}

void cmd_convert(const RunConfig& cfg, std::ostream& os) {
  BoundParams in;
  in.c = parse_rational(cfg.c);
  in.alpha = parse_rational(cfg.alpha);
  in.rho = parse_rational(cfg.rho);
  in.s_size = cfg.s_size < 0 ? 0 : cfg.s_size;
  BoundParams result;
  if (cfg.direction == "csc-to-folner") {
    in.form = BoundForm::Csc;
    result = csc_to_folner(in, in.rho);
  } else if (cfg.direction == "folner-to-csc") {
    in.form = BoundForm::Folner;
    if (cfg.s_size < 0) throw Error(ErrorCode::Usage, "folner-to-csc needs --s-size");
    result = folner_to_csc(in);
  } else {
    throw Error(ErrorCode::Usage, "--direction must be csc-to-folner or folner-to-csc");
  }
  if (cfg.format == "csv") {
    os << "form,c,alpha,rho,s_size,inflation\n"
       << to_string(result.form) << ',' << to_string(result.c) << ',' << to_string(result.alpha) << ','
       << to_string(result.rho) << ',' << result.s_size << ',' << to_string(result.inflation()) << '\n';
  } else {
    emit_json(os, to_json(result));
  }
}

void cmd_certify(const RunConfig& cfg, std::ostream& os) {
  const Group group = parse_group(cfg.group);
  const auto scope = parse_scope(cfg.scope);
  if (!scope) throw Error(ErrorCode::Usage, "unknown --scope '" + cfg.scope + "'");
  BoundParams params;
  params.form = BoundForm::Csc;
  params.c = parse_rational(cfg.c);
  params.alpha = parse_rational(cfg.alpha);
  params.s_size = static_cast<std::int64_t>(group.generator_count());
  CertifyOptions options;
  options.threads = cfg.threads;
  options.ball = ball_options(cfg);
  const Certificate cert = certify_at_scale(group, params, *scope, options);
  if (cfg.format == "csv") {
    os << "form,c,alpha,scope,holds,sets_checked,witness_size,witness_boundary\n"
       << to_string(params.form) << ',' << to_string(params.c) << ',' << to_string(params.alpha) << ','
       << cert.scope << ',' << (cert.holds ? "true" : "false") << ',' << cert.sets_checked << ',';
    if (cert.failing) os << cert.failing->size << ',' << cert.failing->boundary;
    if (!cert.failing) os << ',';
    os << '\n';
  } else {
    emit_json(os, to_json(cert));
  }
  if (!cert.holds) {
    std::string message = "bound fails on a set of size " + std::to_string(cert.failing->size);
    if (cert.witness) message += ": " + joined(*cert.witness);
    throw Falsified{message};
  }
}

void cmd_quotient(const RunConfig& cfg, std::ostream& os) {
  const Group group = parse_group(cfg.group);
  if (group.growth_class() == GrowthClass::Polynomial) {
    throw Error(ErrorCode::NotApplicable, cfg.group + " has polynomial growth; the quotient needs exponential growth");
  }
  FolnerOptions options;
  options.threads = cfg.threads;
  options.ball = ball_options(cfg);
  const auto records = folner_records(group, cfg.horizon, cfg.cap, options);
  const BallTable table = enumerate_ball(group, cfg.horizon, ball_options(cfg));
  const QuotientEstimate q = quotient_estimate(group, cfg.horizon, records, table);
  if (cfg.format == "csv") {
    auto ext = [](const Extended& x) { return x.infinite ? std::string("inf") : std::to_string(x.value); };
    os << "horizon,window_start,numerator_lower,numerator_upper,denominator_upper,denominator_lower_evidence,"
          "c_lower,c_upper_evidence,certified\n"
       << q.horizon << ',' << q.window_start << ',' << ext(q.numerator_lower) << ',' << ext(q.numerator_upper) << ','
       << q.denominator_upper << ',' << q.denominator_lower_evidence << ',' << ext(q.c_lower) << ','
       << ext(q.c_upper_evidence) << ',' << (q.certified ? "true" : "false") << '\n';
  } else {
    nlohmann::json j = to_json(q);
    j["group"] = cfg.group;
    emit_json(os, j);
  }
}

int cmd_suite(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  AcceptanceOptions options;
  options.threads = cfg.threads;
  options.alternate_threads = cfg.threads == 1 ? 8 : 1;
  options.log = &err;
  const auto results = run_acceptance(options);
  os << format_report(results);
  return all_passed(results) ? kExitOk : kExitFalsified;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("CAYLEY_MAX_ELEMENTS")) {
    std::size_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
      err << "error: CAYLEY_MAX_ELEMENTS must be a positive integer\n";
      return kExitError;
    }
    cfg.max_elements = value;
  }

  CLI::App app{"Exact computations on Cayley graphs: balls, boundaries, Folner sets and isoperimetric bounds"};
  app.require_subcommand(1);

  auto* growth = app.add_subcommand("growth", "ball and sphere counts up to a radius");
  add_group(growth, cfg);
  growth->add_option("--radius", cfg.radius)->required();

  auto* phi_cmd = app.add_subcommand("phi", "least radius whose ball exceeds a volume");
  add_group(phi_cmd, cfg);
  phi_cmd->add_option("--v", cfg.v, "volume (rational)")->required();
  phi_cmd->add_option("--radius", cfg.radius, "largest radius to explore");

  auto* avg = app.add_subcommand("avg-length", "average word length over a ball");
  add_group(avg, cfg);
  avg->add_option("--radius", cfg.radius)->required();

  auto* bnd = app.add_subcommand("boundary", "inner boundary of a finite set");
  add_group(bnd, cfg);
  add_omega(bnd, cfg);

  auto* check = app.add_subcommand("check", "check one isoperimetric inequality on a set");
  add_group(check, cfg);
  add_omega(check, cfg);
  check->add_option("--form", cfg.form, "csc-original, avg-growth, growth-cor, epsilon or pete-correia")->required();
  check->add_option("--alpha", cfg.alpha);
  check->add_option("--epsilon", cfg.epsilon);
  check->add_option("--radius", cfg.radius, "largest radius to explore");

  auto* transport = app.add_subcommand("transport", "mass-transport ledger and lemma checks");
  add_group(transport, cfg);
  add_omega(transport, cfg);
  transport->add_option("--radius", cfg.radius)->required();
  transport->add_option("--lemma", cfg.lemma, "spheres, balls, transport, counting, ray-lower, conclude, fiber or all");
  transport->add_option("--alpha", cfg.alpha);

  auto* folner = app.add_subcommand("folner", "Folner function by exhaustive search or family bound");
  add_group(folner, cfg);
  folner->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  folner->add_option("--cap", cfg.cap, "largest set size searched")->check(CLI::PositiveNumber);
  folner->add_flag("--family", cfg.family, "report the standard family's upper bound");
  folner->add_flag("--range", cfg.range, "report every n from 1 up to --n");

  auto* convert = app.add_subcommand("convert", "convert between csc-form and folner-form bounds");
  convert->add_option("--direction", cfg.direction, "csc-to-folner or folner-to-csc")->required();
  convert->add_option("--c", cfg.c)->required();
  convert->add_option("--alpha", cfg.alpha);
  convert->add_option("--rho", cfg.rho);
  convert->add_option("--s-size", cfg.s_size);

  auto* certify = app.add_subcommand("certify", "test a csc-form bound over a finite scope");
  add_group(certify, cfg);
  certify->add_option("--c", cfg.c)->required();
  certify->add_option("--alpha", cfg.alpha);
  certify->add_option("--scope", cfg.scope, "all-subsets-of-B(2) or connected:<k>");

  auto* quotient = app.add_subcommand("quotient", "window estimate of the optimal constant");
  add_group(quotient, cfg);
  quotient->add_option("--horizon", cfg.horizon)->check(CLI::Range(2, 64));
  quotient->add_option("--cap", cfg.cap, "largest set size searched")->check(CLI::PositiveNumber);

  auto* suite = app.add_subcommand("suite", "run the acceptance battery");

  for (auto* sub : {growth, phi_cmd, avg, bnd, check, transport, folner, convert, certify, quotient, suite}) {
    add_common(sub, cfg);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitError;
  }

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      err << "error: cannot write " << cfg.output << '\n';
      return kExitError;
    }
  }
  std::ostream& os = cfg.output.empty() ? out : file;

  try {
    // Build the whole report first so a failure never leaves partial output.
    std::ostringstream buffer;
    int code = kExitOk;
    std::string falsified;
    try {
      if (growth->parsed()) cmd_growth(cfg, buffer);
      if (phi_cmd->parsed()) cmd_phi(cfg, buffer);
      if (avg->parsed()) cmd_avg_length(cfg, buffer);
      if (bnd->parsed()) cmd_boundary(cfg, buffer);
      if (check->parsed()) cmd_check(cfg, buffer);
      if (transport->parsed()) cmd_transport(cfg, buffer);
      if (folner->parsed()) cmd_folner(cfg, buffer);
      if (convert->parsed()) cmd_convert(cfg, buffer);
      if (certify->parsed()) cmd_certify(cfg, buffer);
      if (quotient->parsed()) cmd_quotient(cfg, buffer);
      if (suite->parsed()) code = cmd_suite(cfg, buffer, err);
    } catch (const Falsified& f) {
      code = kExitFalsified;
      falsified = f.message;
    }
    os << buffer.str();
    os.flush();
    if (!falsified.empty()) err << "falsified: " << falsified << '\n';
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.last_completed_radius()) err << "last completed radius: " << *e.last_completed_radius() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace cayley::cli
