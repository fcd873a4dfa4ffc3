#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace monochrome::cli {

using nlohmann::json;

json to_json(const Element& e) { return e.to_string(); }

json to_json(const std::vector<Element>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(e.to_string());
  return out;
}

json to_json(const Witness& w) {
  return {{"x", to_json(w.x)}, {"y", to_json(w.y)}, {"color", w.color}, {"elements", to_json(w.elements)}};
}

json to_json(const PSWitness& w) {
  return {{"gaps", to_json(w.gaps)}, {"block", to_json(w.block)}, {"anchor", to_json(w.anchor)}};
}

json to_json(const HjResult& r) {
  json out = {{"r", r.r}, {"t", r.t}, {"N", r.N},
              {"status", r.status == HjResult::Status::Found ? "found" : "not_found_within"}};
  if (r.avoiding_coloring) {
    out["avoiding_coloring"] = *r.avoiding_coloring;
    out["avoiding_length"] = r.avoiding_length;
  }
  return out;
}

namespace {

std::string csv_field(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string rows_to_csv(const std::vector<json>& rows) {
  std::vector<std::string> columns;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.items())
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + csv_field(columns[c]);
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out += (c ? "," : "") + (r.contains(columns[c]) ? csv_field(r[columns[c]]) : "");
    out += "\n";
  }
  return out;
}

}  // namespace

std::string reports_to_csv(const std::vector<json>& reports) { return rows_to_csv(reports); }

namespace {

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  int code = Success;
  json payload = json::object();
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageFailure("cannot write '" + path + "'");
  out << text;
}

// Options shared by most subcommands. Defaults apply when neither a flag nor
// a config key sets them.
struct Options {
  std::string ring = "Z";
  std::string window;
  unsigned colors = 2;
  std::uint64_t seed = 0;
  std::string coloring_path;
  std::string family = "t";
  std::string exclude_y, exclude_x;
  bool allow_out_of_window = false;
  bool allow_degenerate = false;
  std::string format = "json";
  unsigned jobs = 1;
  std::optional<std::uint64_t> budget;
  std::string output;

  std::optional<std::size_t> limit;
  std::string y;
  std::string set_a, gaps, block, anchor, dilate, divide, entries;
  std::size_t length = 1, samples = 1;
  unsigned alphabet = 2, max_n = 3;
  std::uint64_t max_n_wide = 64;
  std::string base_y, gamma, point, r0 = "0";
  unsigned sigma_n = 2;
  std::size_t random_trials = 0;
  bool no_cross_check = false;
  std::string model_path, coloring_out, sequence, start;
  std::vector<std::string> report_files;
};

std::shared_ptr<const Window> make_window(const Options& o) {
  if (o.window.empty()) throw UsageFailure("--window is required");
  return std::make_shared<const Window>(RingSpec::parse(o.ring), WindowParams::parse(o.window));
}

ScanConstraints make_constraints(const Options& o, const Window& w) {
  ScanConstraints k = ScanConstraints::defaults(w.spec());
  if (!o.exclude_y.empty()) k.exclude_y = parse_element_list(o.exclude_y, w);
  if (!o.exclude_x.empty()) k.exclude_x = parse_element_list(o.exclude_x, w);
  k.require_in_window = !o.allow_out_of_window;
  k.forbid_degenerate = !o.allow_degenerate;
  return k;
}

Coloring make_coloring(const Options& o) {
  if (!o.coloring_path.empty()) return parse_coloring(read_file(o.coloring_path));
  return random_coloring(make_window(o), o.colors, o.seed);
}

std::uint64_t budget_or(const Options& o, std::uint64_t fallback) {
  if (o.budget) return *o.budget;
  if (const char* env = std::getenv("MONOCHROME_BUDGET")) {
    try {
      return detail::parse_u64(detail::trim(env), "MONOCHROME_BUDGET");
    } catch (const ParseError& e) {
      throw UsageFailure(e.what());
    }
  }
  return fallback;
}

// `2,3` or `{2,3}`, order preserved.
std::vector<Element> parse_sequence(const RingSpec& ring, std::string text) {
  text = detail::strip_spaces(text);
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
  std::vector<Element> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_element(ring, item));
  if (out.empty()) throw UsageFailure("empty sequence");
  return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(detail::strip_spaces(text));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<unsigned>(detail::parse_u64(item, "index")));
  return out;
}

json coloring_json(const Coloring& c) {
  return {{"ring", c.window().spec().to_string()}, {"window", c.window().params().to_string()},
          {"colors", c.colors_count()}, {"assignment", c.colors()}};
}

Outcome run_scan(const Options& o) {
  const Coloring c = make_coloring(o);
  const auto F = parse_family(c.window().spec(), o.family);
  const auto k = make_constraints(o, c.window());
  const auto witnesses = witness_scan(c, F, k, o.limit, o.jobs);
  Outcome res;
  res.payload = {{"ring", c.window().spec().to_string()}, {"window", c.window().params().to_string()},
                 {"colors", c.colors_count()}, {"F", F.to_string()}, {"count", witnesses.size()}};
  if (o.coloring_path.empty()) res.payload["seed"] = o.seed;
  json list = json::array();
  for (const auto& w : witnesses) list.push_back(to_json(w));
  res.payload["witnesses"] = std::move(list);
  res.code = witnesses.empty() ? NotFound : Success;
  return res;
}

Outcome run_abundance(const Options& o) {
  const Coloring c = make_coloring(o);
  const RingSpec& ring = c.window().spec();
  const auto F = parse_family(ring, o.family);
  const auto k = make_constraints(o, c.window());
  Outcome res;
  res.payload = {{"ring", ring.to_string()}, {"window", c.window().params().to_string()},
                 {"colors", c.colors_count()}, {"F", F.to_string()}};
  json profiles = json::array();
  auto profile_row = [&](const Element& y, bool with_sets) {
    const auto prof = abundance_profile(c, F, y, k);
    json counts = json::array(), sets = json::array();
    for (const auto& s : prof) {
      counts.push_back(s.size());
      sets.push_back(to_json(s));
    }
    json row = {{"y", to_json(y)}, {"counts", counts}};
    if (with_sets) row["sets"] = sets;
    return row;
  };
  if (!o.y.empty()) {
    profiles.push_back(profile_row(parse_element(ring, o.y), true));
  } else {
    for (const auto& y : c.window().elements())
      if (k.allows_y(y)) profiles.push_back(profile_row(y, false));
  }
  res.payload["profiles"] = std::move(profiles);
  return res;
}

PSWitness witness_from(const Options& o, const Window& w) {
  if (o.anchor.empty()) throw UsageFailure("--anchor is required");
  return {parse_element_list(o.gaps, w), parse_element_list(o.block, w), parse_element(w.spec(), o.anchor)};
}

Outcome run_syndetic(const Options& o) {
  const auto w = make_window(o);
  const auto A = parse_element_set(o.set_a, *w);
  const auto G = parse_element_list(o.gaps, *w);
  Outcome res;
  const auto bad = syndetic_check(A, G, *w);
  res.payload = {{"holds", !bad}};
  if (bad) {
    res.payload["counterexample"] = to_json(*bad);
    res.code = NotFound;
  }
  return res;
}

Outcome run_ps(const Options& o) {
  const auto w = make_window(o);
  const auto A = parse_element_set(o.set_a, *w);
  const auto found = ps_witness_search(A, parse_element_list(o.gaps, *w), parse_element_list(o.block, *w), *w);
  Outcome res;
  res.payload = {{"found", found.has_value()}};
  if (found) res.payload["witness"] = to_json(*found);
  else res.code = NotFound;
  return res;
}

Outcome run_ipstar(const Options& o) {
  const auto w = make_window(o);
  const auto A = parse_element_set(o.set_a, *w);
  const Window entries = o.entries.empty() ? *w : Window(w->spec(), WindowParams::parse(o.entries));
  const auto seq = ipstar_refute(A, entries, o.length, o.samples, o.seed);
  Outcome res;
  res.payload = {{"refuted", seq.has_value()}, {"length", o.length}, {"samples", o.samples}, {"seed", o.seed}};
  if (seq) {
    res.payload["counterexample"] = to_json(*seq);
    res.payload["finite_sums"] = to_json(finite_sums(*seq).sums);
    res.code = NotFound;
  }
  return res;
}

Outcome run_transport(const Options& o) {
  const auto w = make_window(o);
  const RingSpec& ring = w->spec();
  const auto A = parse_element_set(o.set_a, *w);
  const PSWitness input = witness_from(o, *w);
  Outcome res;
  res.payload = {{"input", to_json(input)}, {"input_valid", validate_ps_witness(input, A)}};
  if (o.dilate.empty() == o.divide.empty()) throw UsageFailure("give exactly one of --dilate or --divide");
  if (!o.dilate.empty()) {
    const Element r = parse_element(ring, o.dilate);
    if (r.is_zero()) throw UsageFailure("--dilate must be nonzero");
    const PSWitness out = dilation_transport(input, r);
    res.payload["witness"] = to_json(out);
    res.payload["valid"] = validate_ps_witness(out, dilate(A, r));
  } else {
    const Element y = parse_element(ring, o.divide);
    if (y.is_zero()) throw UsageFailure("--divide must be nonzero");
    const auto out = division_transport(input, y, &A);
    if (const auto* nd = std::get_if<NotDivisible>(&out)) {
      res.payload["not_divisible"] = to_json(nd->value);
      res.code = NotFound;
      return res;
    }
    const auto& wit = std::get<PSWitness>(out);
    res.payload["witness"] = to_json(wit);
    res.payload["valid"] = validate_ps_witness(wit, *divide_set(A, y));
  }
  if (!res.payload["valid"].get<bool>()) res.code = NotFound;
  return res;
}

Outcome run_hj(const Options& o) {
  HjSearchBudget budget;
  budget.jobs = o.jobs;
  budget.max_work = static_cast<double>(budget_or(o, static_cast<std::uint64_t>(budget.max_work)));
  Outcome res;
  try {
    const auto r = hj_number_exhaustive(o.colors, o.alphabet, o.max_n, budget);
    res.payload = to_json(r);
    res.code = r.status == HjResult::Status::Found ? Success : NotFound;
  } catch (const BudgetExceeded& e) {
    res.payload = {{"r", o.colors}, {"t", o.alphabet}, {"status", "budget_exceeded"}, {"message", e.what()}};
    res.code = NotFound;
  }
  return res;
}

json sigma_checks_json(const std::vector<SigmaLineCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"f", c.f.to_string()}, {"lhs", to_json(c.lhs)}, {"s", to_json(c.s)}, {"y_gamma", to_json(c.y_gamma)},
                   {"rhs", to_json(c.rhs)}, {"holds", c.holds}});
  return out;
}

Outcome run_sigma(const Options& o) {
  const RingSpec ring = RingSpec::parse(o.ring);
  const auto F = parse_family(ring, o.family);
  const auto alphabet = coefficient_alphabet(F, ring);
  const unsigned d = static_cast<unsigned>(std::max(F.max_degree(), 1));
  const Letter q = static_cast<Letter>(alphabet.size());
  Outcome res;
  res.payload = {{"ring", ring.to_string()}, {"F", F.to_string()}, {"d", d}, {"alphabet", to_json(alphabet)}};

  if (o.random_trials > 0) {
    SplitMix64 rng(o.seed);
    std::size_t holds = 0;
    for (std::size_t trial = 0; trial < o.random_trials; ++trial) {
      const unsigned N = o.sigma_n;
      std::vector<Element> base;
      for (unsigned i = 0; i < N; ++i) base.push_back(random_element(ring, rng, 5));
      std::vector<unsigned> members;
      for (unsigned i = 1; i <= N; ++i)
        if (rng.below(2)) members.push_back(i);
      if (members.empty()) members.push_back(static_cast<unsigned>(1 + rng.below(N)));
      std::vector<std::vector<Letter>> arrays;
      for (unsigned j = 1; j <= d; ++j) {
        std::vector<Letter> a(ipow(N, j));
        for (auto& l : a) l = static_cast<Letter>(1 + rng.below(q));
        arrays.push_back(std::move(a));
      }
      const auto checks = verify_sigma_line_identity(F, YAssignment::multiplicative(base, d), WildcardSet(members, N),
                                                     PhjPoint(d, N, q, std::move(arrays)), random_element(ring, rng, 5));
      if (std::all_of(checks.begin(), checks.end(), [](const SigmaLineCheck& c) { return c.holds; })) ++holds;
    }
    res.payload["trials"] = o.random_trials;
    res.payload["holds"] = holds;
    res.code = holds == o.random_trials ? Success : NotFound;
    return res;
  }

  if (o.base_y.empty() || o.gamma.empty()) throw UsageFailure("--y and --gamma are required (or use --random)");
  const auto base = parse_sequence(ring, o.base_y);
  const unsigned N = static_cast<unsigned>(base.size());
  PhjPoint u = PhjPoint::constant(d, N, q, 1);
  if (!o.point.empty()) {
    std::vector<std::vector<Letter>> arrays;
    std::stringstream ss(o.point);
    std::string part;
    while (std::getline(ss, part, ';')) {
      const auto letters = parse_unsigned_list(part);
      arrays.emplace_back(letters.begin(), letters.end());
    }
    u = PhjPoint(d, N, q, std::move(arrays));
  }
  const auto checks = verify_sigma_line_identity(F, YAssignment::multiplicative(base, d),
                                                 WildcardSet(parse_unsigned_list(o.gamma), N), u, parse_element(ring, o.r0));
  res.payload["sigma_u"] = to_json(sigma_embed(alphabet, YAssignment::multiplicative(base, d), parse_element(ring, o.r0), u));
  res.payload["checks"] = sigma_checks_json(checks);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const SigmaLineCheck& c) { return c.holds; });
  res.payload["all_hold"] = all;
  res.code = all ? Success : NotFound;
  return res;
}

AvoidanceInstance make_instance(const Options& o) {
  const auto w = make_window(o);
  return build_instance(w, o.colors, parse_family(w->spec(), o.family), make_constraints(o, *w));
}

Outcome run_avoid(const Options& o) {
  const auto inst = make_instance(o);
  const auto r = avoidance_backtrack(inst, budget_or(o, 100'000'000), o.jobs);
  Outcome res;
  res.payload = {{"ring", inst.window->spec().to_string()}, {"window", inst.window->params().to_string()},
                 {"colors", inst.r}, {"F", inst.F.to_string()}, {"candidates", inst.candidates.size()},
                 {"status", to_string(r.status)}, {"nodes", r.stats.nodes}, {"backtracks", r.stats.backtracks}};
  if (r.coloring) {
    res.payload["coloring"] = r.coloring->colors();
    if (!o.coloring_out.empty()) write_file(o.coloring_out, format_coloring(*r.coloring));
  }
  res.code = r.status == AvoidanceResult::Status::AvoidanceFound ? Success : NotFound;
  return res;
}

Outcome run_moreira(const Options& o) {
  const auto F = parse_family(RingSpec::integers(), o.family);
  const auto m = moreira_number(o.colors, F, o.max_n_wide, budget_or(o, 100'000'000), !o.no_cross_check, o.jobs);
  Outcome res;
  res.payload = {{"quantity", "least N such that every r-coloring of {1..N} has a monochromatic instance"},
                 {"colors", o.colors}, {"F", F.to_string()}, {"maxN", o.max_n_wide},
                 {"status", to_string(m.status)}, {"N", m.N}};
  json probes = json::array();
  for (const auto& p : m.probes)
    probes.push_back({{"N", p.N}, {"status", to_string(p.status)}, {"candidates", p.candidates}, {"nodes", p.stats.nodes}});
  res.payload["probes"] = probes;
  if (m.dpll_agrees) res.payload["dpll_agrees"] = *m.dpll_agrees;
  res.code = m.status == MoreiraResult::Status::Found ? Success : NotFound;
  if (m.dpll_agrees && !*m.dpll_agrees) res.code = NotFound;
  return res;
}

Outcome run_cnf_export(const Options& o, std::ostream& out, bool& raw) {
  const auto inst = make_instance(o);
  const Cnf cnf = cnf_export(inst);
  Outcome res;
  if (o.output.empty()) {
    out << format_dimacs(cnf);
    raw = true;
    return res;
  }
  write_file(o.output, format_dimacs(cnf));
  res.payload = {{"path", o.output}, {"vars", cnf.num_vars}, {"clauses", cnf.clauses.size()},
                 {"candidates", inst.candidates.size()}};
  return res;
}

Outcome run_cnf_decode(const Options& o) {
  if (o.model_path.empty()) throw UsageFailure("--model is required");
  const auto inst = make_instance(o);
  const auto model = parse_model(read_file(o.model_path));
  Outcome res;
  try {
    const Coloring c = cnf_model_decode(model, inst);
    res.payload = coloring_json(c);
    res.payload["valid"] = true;
    if (!o.output.empty()) write_file(o.output, format_coloring(c));
  } catch (const ModelError& e) {
    res.payload = {{"valid", false}, {"error", e.what()}};
    res.code = NotFound;
  }
  return res;
}

Outcome run_ufp_verify(const Options& o) {
  const RingSpec ring = RingSpec::parse(o.ring);
  const auto seq = parse_sequence(ring, o.sequence);
  Outcome res;
  res.payload = {{"sequence", to_json(seq)}};
  if (const auto v = has_ufp(seq)) {
    res.payload["holds"] = false;
    res.payload["violation"] = {{"H", v->H}, {"K", v->K}, {"product", to_json(v->product)}};
    res.code = NotFound;
  } else {
    res.payload["holds"] = true;
  }
  if (const auto z = product_hits_zero_or_one(seq)) res.payload["product_in_zero_one"] = *z;
  return res;
}

Outcome run_ufp_grow(const Options& o) {
  const auto w = make_window(o);
  if (o.start.empty()) throw UsageFailure("--start is required");
  const auto grown = grow_ufp(parse_element(w->spec(), o.start), *w, o.length);
  Outcome res;
  if (const auto* ex = std::get_if<PoolExhausted>(&grown)) {
    res.payload = {{"status", "pool_exhausted"}, {"step", ex->step}};
    res.code = NotFound;
    return res;
  }
  const auto& seq = std::get<UfpSequence>(grown);
  res.payload = {{"status", "grown"}, {"sequence", to_json(seq.elements())}, {"has_ufp", !has_ufp(seq.elements())}};
  return res;
}

Outcome run_report(const Options& o, std::ostream& out, bool& raw) {
  std::vector<json> rows;
  for (const auto& path : o.report_files) {
    try {
      rows.push_back(json::parse(read_file(path)));
    } catch (const json::parse_error& e) {
      throw UsageFailure("'" + path + "' is not a JSON report: " + e.what());
    }
  }
  const std::string csv = reports_to_csv(rows);
  Outcome res;
  if (o.output.empty()) {
    out << csv;
    raw = true;
  } else {
    write_file(o.output, csv);
    res.payload = {{"path", o.output}, {"rows", rows.size()}};
  }
  return res;
}

void emit(const json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << "\n";
    return;
  }
  if (format == "text") {
    for (const auto& [k, v] : report.items()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    return;
  }
  // csv: the first list of objects becomes the table; otherwise one row.
  for (const auto& [k, v] : report.items())
    if (v.is_array() && !v.empty() && v[0].is_object()) {
      out << rows_to_csv(std::vector<json>(v.begin(), v.end()));
      return;
    }
  out << rows_to_csv({report});
}

// Appends `--key=value` for config entries whose flag is absent from args.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageFailure("--config needs a file");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (path.empty()) return rest;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageFailure("config line without '=': '" + t + "'");
    const std::string key = detail::trim(t.substr(0, eq)), value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw UsageFailure("config line without a key: '" + t + "'");
    const std::string flag = "--" + key;
    const bool given = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) rest.push_back(flag + "=" + value);
  }
  return rest;
}

void add_common(CLI::App* app, Options& o, bool with_coloring) {
  app->add_option("--ring", o.ring, "Z, Zi or GF(q)[x]");
  app->add_option("--window", o.window, "N=<n>[,sym], B=<b> or d=<d>");
  app->add_option("--colors", o.colors, "number of colors r")->check(CLI::PositiveNumber);
  app->add_option("--F", o.family, "polynomials in t, ';'-separated");
  app->add_option("--exclude-y", o.exclude_y, "element set excluded for y (default {0,1})");
  app->add_option("--exclude-x", o.exclude_x, "element set excluded for x (default {0})");
  app->add_flag("--allow-out-of-window", o.allow_out_of_window, "ignore elements outside the window");
  app->add_flag("--allow-degenerate", o.allow_degenerate, "keep single-element instances");
  if (with_coloring) {
    app->add_option("--seed", o.seed, "seed for the random coloring");
    app->add_option("--coloring", o.coloring_path, "coloring file instead of a random coloring");
  }
}

void add_output(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--budget", o.budget, "node/work cap (default: MONOCHROME_BUDGET)");
  app->add_option("-o,--output", o.output, "output file");
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Monochromatic sums and products: scans, largeness witnesses, Hales-Jewett and avoidance search"};
  app.name("monochrome");
  app.require_subcommand(1);

  auto* scan = app.add_subcommand("scan", "list monochromatic {xy} u {x+f(y)} instances");
  add_common(scan, o, true);
  add_output(scan, o);
  scan->add_option("--limit", o.limit, "stop after this many witnesses");

  auto* abundance = app.add_subcommand("abundance", "per-y sets of x whose instance is monochromatic");
  add_common(abundance, o, true);
  add_output(abundance, o);
  abundance->add_option("--y", o.y, "single y (default: sweep all admissible y)");

  auto* largeness = app.add_subcommand("largeness", "syndetic / piecewise-syndetic witnesses, IP* evidence, transport");
  largeness->require_subcommand(1);
  auto* syndetic = largeness->add_subcommand("syndetic", "check that G-translates of A cover the window");
  auto* ps = largeness->add_subcommand("ps", "least anchor x with B + x covered by G-translates of A");
  auto* ipstar = largeness->add_subcommand("ipstar", "random search for a sequence whose finite sums miss A");
  auto* transport = largeness->add_subcommand("transport", "dilate or divide a (G, B, x) witness");
  for (auto* sub : {syndetic, ps, ipstar, transport}) {
    add_common(sub, o, false);
    add_output(sub, o);
    sub->add_option("--A", o.set_a, "element set: {..}, evens, odds, all, ideal(m)")->required();
  }
  for (auto* sub : {syndetic, ps, transport}) sub->add_option("--G", o.gaps, "gap set")->required();
  for (auto* sub : {ps, transport}) sub->add_option("--B", o.block, "block")->required();
  transport->add_option("--anchor", o.anchor, "anchor x")->required();
  transport->add_option("--dilate", o.dilate, "multiply the witness by r");
  transport->add_option("--divide", o.divide, "divide the witness by y");
  ipstar->add_option("--seed", o.seed, "sampling seed");
  ipstar->add_option("--length", o.length, "sequence length")->check(CLI::PositiveNumber);
  ipstar->add_option("--samples", o.samples, "number of sequences");
  ipstar->add_option("--entries", o.entries, "window the entries are drawn from (default --window)");

  auto* hj = app.add_subcommand("hj", "exhaustive Hales-Jewett number at tiny scale");
  add_output(hj, o);
  hj->add_option("--colors", o.colors, "r")->check(CLI::PositiveNumber);
  hj->add_option("--alphabet", o.alphabet, "t")->check(CLI::PositiveNumber);
  hj->add_option("--maxN", o.max_n, "largest N to try")->check(CLI::PositiveNumber);

  auto* sigma = app.add_subcommand("sigma", "verify sigma(u + a_1 gamma + ... + a_d gamma^d) = r0 + s + f(y_gamma)");
  add_output(sigma, o);
  sigma->add_option("--ring", o.ring, "Z, Zi or GF(q)[x]");
  sigma->add_option("--F", o.family, "polynomial family");
  sigma->add_option("--y", o.base_y, "base values y_1,...,y_N (products give y on multi-indices)");
  sigma->add_option("--gamma", o.gamma, "wildcard set, e.g. 1,2");
  sigma->add_option("--u", o.point, "letters per degree, ';' between degrees (default all 1)");
  sigma->add_option("--r0", o.r0, "base ring element");
  sigma->add_option("--random", o.random_trials, "run this many random instances instead");
  sigma->add_option("--N", o.sigma_n, "N for random instances")->check(CLI::PositiveNumber);
  sigma->add_option("--seed", o.seed, "seed for random instances");

  auto* search = app.add_subcommand("search", "avoidance colorings and least-N search");
  search->require_subcommand(1);
  auto* avoid = search->add_subcommand("avoid", "find a coloring of the window with no monochromatic instance");
  add_common(avoid, o, false);
  add_output(avoid, o);
  avoid->add_option("--coloring-out", o.coloring_out, "store a found coloring here");
  auto* moreira = search->add_subcommand("moreira", "least N such that every r-coloring of {1..N} is forced");
  add_output(moreira, o);
  moreira->add_option("--colors", o.colors, "r")->check(CLI::PositiveNumber);
  moreira->add_option("--F", o.family, "polynomial family over Z");
  moreira->add_option("--maxN", o.max_n_wide, "largest N to try")->check(CLI::PositiveNumber);
  moreira->add_flag("--no-cross-check", o.no_cross_check, "skip the reference DPLL check");

  auto* cnf = app.add_subcommand("cnf", "DIMACS export and model decoding");
  cnf->require_subcommand(1);
  auto* cnf_exp = cnf->add_subcommand("export", "write the avoidance CNF");
  auto* cnf_dec = cnf->add_subcommand("decode", "turn a solver model into a coloring");
  for (auto* sub : {cnf_exp, cnf_dec}) {
    add_common(sub, o, false);
    add_output(sub, o);
  }
  cnf_dec->add_option("--model", o.model_path, "solver output or one literal per line")->required();

  auto* ufp = app.add_subcommand("ufp", "uniqueness of finite products");
  ufp->require_subcommand(1);
  auto* verify = ufp->add_subcommand("verify", "check that all finite products are distinct");
  add_output(verify, o);
  verify->add_option("--ring", o.ring, "Z, Zi or GF(q)[x]");
  verify->add_option("--seq", o.sequence, "sequence, e.g. 2,3")->required();
  auto* grow = ufp->add_subcommand("grow", "extend a sequence greedily over a window");
  add_output(grow, o);
  grow->add_option("--ring", o.ring, "Z, Zi or GF(q)[x]");
  grow->add_option("--window", o.window, "pool window");
  grow->add_option("--start", o.start, "first element");
  grow->add_option("--length", o.length, "target length (<= 20)")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "merge JSON reports into a CSV table");
  report->add_option("files", o.report_files, "JSON report files")->required();
  report->add_option("-o,--output", o.output, "CSV output file");

  std::string command_echo;
  for (const auto& a : raw_args) command_echo += (command_echo.empty() ? "" : " ") + a;

  try {
    auto args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Success;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return Success;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return UsageError;
  }

  Outcome res;
  bool raw = false;
  try {
    if (*scan) res = run_scan(o);
    else if (*abundance) res = run_abundance(o);
    else if (*syndetic) res = run_syndetic(o);
    else if (*ps) res = run_ps(o);
    else if (*ipstar) res = run_ipstar(o);
    else if (*transport) res = run_transport(o);
    else if (*hj) res = run_hj(o);
    else if (*sigma) res = run_sigma(o);
    else if (*avoid) res = run_avoid(o);
    else if (*moreira) res = run_moreira(o);
    else if (*cnf_exp) res = run_cnf_export(o, out, raw);
    else if (*cnf_dec) res = run_cnf_decode(o);
    else if (*verify) res = run_ufp_verify(o);
    else if (*grow) res = run_ufp_grow(o);
    else if (*report) res = run_report(o, out, raw);
  } catch (const std::exception& e) {
    // Malformed literals, files and parameters all land here.
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  if (raw) return res.code;

  json full = {{"command", command_echo}, {"timestamp", utc_timestamp()}, {"exit_status", res.code}};
  for (auto& [k, v] : res.payload.items()) full[k] = v;
  // cnf and report write their own artifact to -o; elsewhere -o takes the report.
  if (o.output.empty() || *cnf_exp || *cnf_dec || *report) {
    emit(full, o.format, out);
  } else {
    std::ostringstream buf;
    emit(full, o.format, buf);
    try {
      write_file(o.output, buf.str());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return UsageError;
    }
  }
  return res.code;
}

}  // namespace monochrome::cli
