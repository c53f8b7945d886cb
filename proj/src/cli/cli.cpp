#include "asdefect/cli.hpp"

#include "asdefect/errors.hpp"
#include "asdefect/oracle.hpp"
#include "asdefect/synth.hpp"
#include "asdefect/tower.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <tuple>

namespace asdefect::cli {

void RunConfig::validate() const {
  if (precision < 8) throw invalid_input("precision must be >= 8");
  if (cases == 0) throw invalid_input("cases must be >= 1");
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw invalid_input("malformed JSON in " + source + " at line " + std::to_string(line) + ", column " +
                        std::to_string(column));
  }
}

namespace {

Rat rat_field(const json& j, const char* key) {
  if (!j.contains(key)) throw invalid_input(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return Rat::parse(v.get<std::string>());
  throw invalid_input(std::string("field '") + key + "' must be an integer or a \"num/den\" string");
}

long long_field(const json& j, const char* key) {
  if (!j.contains(key)) throw invalid_input(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number_integer()) throw invalid_input(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<long>();
}

long long_field_or(const json& j, const char* key, long fallback) {
  return j.contains(key) ? long_field(j, key) : fallback;
}

std::vector<TransformStep> steps_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw invalid_input(std::string(what) + " must be an array");
  std::vector<TransformStep> out;
  for (const auto& s : arr) {
    if (!s.is_object()) throw invalid_input(std::string(what) + " entries must be objects {\"m\", \"q\"}");
    const long m = long_field(s, "m");
    const long q = long_field(s, "q");
    if (m < 1 || q < 1) throw invalid_input("m and q must be positive");
    out.push_back(TransformStep::make(m, q, long_field_or(s, "alpha", 1)));
  }
  return out;
}

json steps_to_json(const std::vector<TransformStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps) arr.push_back({{"m", s.m}, {"q", s.q}});
  return arr;
}

json state_row(const ExtensionState& s, std::optional<long> sigma) {
  json r;
  r["depth"] = s.depth;
  r["type"] = type_name(s.type);
  r["c"] = s.type == GermType::T0 ? std::string("0") : s.c().get_str();
  r["jac_ratio"] = s.jac_ratio.str();
  r["M"] = s.M.get_str();
  r["d"] = s.d().str();
  r["sigma"] = sigma ? json(*sigma) : json(nullptr);
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw invalid_input("cannot open " + path);
  return read_all(f);
}

std::string read_input(const RunConfig& cfg) {
  if (cfg.input_path) return read_file(*cfg.input_path);
  return read_all(std::cin);
}

struct Emitted {
  json doc;
  std::string csv;
};

// ---- simulate / distance ----

Emitted simulate(const RunConfig& cfg, bool distance_only) {
  const std::string source = cfg.input_path.value_or("<stdin>");
  const ScheduleInput in = schedule_from_json(parse_json(read_input(cfg), source));
  const std::size_t depth = cfg.depth.value_or(in.schedule.tail ? 20 : in.schedule.prefix.size());
  EngineOptions opts;
  opts.strict_mbar = cfg.strict_mbar;
  const Trace tr = run_schedule(in.seed, in.schedule, depth, opts);
  const json sched = schedule_to_json(in.seed, in.schedule);
  const std::string hash = schedule_hash(sched);

  std::optional<DistanceBound> dist;
  if (!tr.halted_at_t0) dist = distance_from_trace(tr);
  std::optional<DefectVerdict> verdict;
  if (in.schedule.tail) verdict = defect_verdict(tr);

  Emitted e;
  json& doc = e.doc;
  doc["p"] = in.p;
  doc["c"] = in.seed.c().get_str();
  doc["schedule_hash"] = hash;
  if (!distance_only) {
    doc["schedule"] = sched;
    json rows = json::array();
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      rows.push_back(state_row(tr.states[i], i > 0 ? std::optional<long>(tr.sigma_values[i - 1]) : std::nullopt));
    }
    doc["states"] = rows;
    doc["halted_at_t0"] = tr.halted_at_t0;
  }
  doc["distance"] = dist ? distance_to_json(*dist) : json(nullptr);
  if (verdict) {
    doc["verdict"] = verdict_name(verdict->verdict);
    doc["value_group_index"] = value_group_index(tr).get_str();
  }

  std::ostringstream csv;
  csv << "# p = " << in.p << "\n# c = " << in.seed.c().get_str() << "\n# schedule_hash = " << hash << "\n";
  if (verdict) csv << "# verdict = " << verdict_name(verdict->verdict) << "\n";
  if (dist) {
    csv << "# dist_lower = " << dist->lower.str() << "\n# dist_upper = " << dist->upper.str()
        << "\n# exact = " << (dist->exact ? "true" : "false") << "\n";
  }
  if (!distance_only) {
    csv << "depth,type,c,jac_ratio,M,d_i,sigma\n";
    for (const auto& row : doc["states"]) {
      csv << row["depth"].get<std::size_t>() << ',' << row["type"].get<std::string>() << ','
          << row["c"].get<std::string>() << ',' << row["jac_ratio"].get<std::string>() << ','
          << row["M"].get<std::string>() << ',' << row["d"].get<std::string>() << ','
          << (row["sigma"].is_null() ? std::string() : std::to_string(row["sigma"].get<long>())) << "\n";
    }
  }
  csv << "# " << (dist ? dist->describe() : std::string("dist undefined (trace reached T0)")) << "\n";
  e.csv = csv.str();
  return e;
}

// ---- synthesize ----

SwitchPlan plan_from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("plan must be an object {\"prefix\", \"tail\"}");
  SwitchPlan plan;
  auto ints = [](const json& arr, const char* what) {
    if (!arr.is_array()) throw invalid_input(std::string("plan ") + what + " must be an array");
    std::vector<int> v;
    for (const auto& x : arr) {
      if (!x.is_number_integer()) throw invalid_input(std::string("plan ") + what + " entries must be integers");
      v.push_back(x.get<int>());
    }
    return v;
  };
  if (j.contains("prefix")) plan.prefix = ints(j.at("prefix"), "prefix");
  if (!j.contains("tail")) throw invalid_input("missing field 'tail'");
  plan.tail = ints(j.at("tail"), "tail");
  return plan;
}

Emitted synthesize_cmd(const RunConfig& cfg) {
  const json in = parse_json(read_input(cfg), cfg.input_path.value_or("<stdin>"));
  if (!in.is_object()) throw invalid_input("synthesize input must be an object");
  SynthParams params;
  params.p = long_field_or(in, "p", 2);
  params.p_aux = long_field_or(in, "p_aux", 3);
  params.e = long_field_or(in, "e", 1);
  params.alpha = in.contains("alpha") ? rat_field(in, "alpha") : Rat(0);
  params.depth = static_cast<std::size_t>(long_field_or(in, "depth", 20));
  if (cfg.depth) params.depth = *cfg.depth;
  params.lambda_cap = long_field_or(in, "lambda_cap", 64);
  if (!in.contains("plan")) throw invalid_input("missing field 'plan'");
  const SwitchPlan plan = plan_from_json(in.at("plan"));
  const SynthesisResult r = synthesize(params, plan);

  Schedule full = r.schedule;
  if (r.discarded_step) full.prefix.insert(full.prefix.begin(), *r.discarded_step);
  const ExtensionState seed = ExtensionState::seed(params.p, GermType::T1, Rat(params.e));
  const json sched = schedule_to_json(seed, full);
  const std::string hash = schedule_hash(sched);
  const bool envelope = verify_envelope(r.trace, params.alpha);

  Emitted e;
  json& doc = e.doc;
  doc["p"] = params.p;
  doc["c"] = seed.c().get_str();
  doc["schedule_hash"] = hash;
  doc["schedule"] = sched;
  doc["first_index"] = r.trace.first_index;
  doc["alpha"] = params.alpha.str();
  json rows = json::array();
  for (std::size_t i = 0; i < r.trace.states.size(); ++i) {
    rows.push_back(state_row(r.trace.states[i],
                             i > 0 ? std::optional<long>(r.trace.sigma_values[i - 1]) : std::nullopt));
  }
  doc["states"] = rows;
  json cps = json::array();
  for (std::size_t k : r.trace.checkpoints) {
    const std::size_t t = r.trace.first_index + k;
    cps.push_back({{"position", k},
                   {"t", t},
                   {"d", r.trace.d_values[k].str()},
                   {"window_upper", (params.alpha + pow2_neg(static_cast<unsigned>(t))).str()}});
  }
  doc["checkpoints"] = cps;
  doc["envelope_ok"] = envelope;
  doc["distance"] = distance_to_json(r.bound);

  std::ostringstream csv;
  csv << "# p = " << params.p << "\n# c = " << seed.c().get_str() << "\n# schedule_hash = " << hash
      << "\n# first_index = " << r.trace.first_index << "\n# dist_lower = " << r.bound.lower.str()
      << "\n# dist_upper = " << r.bound.upper.str() << "\n# exact = false\n";
  csv << "depth,type,c,jac_ratio,M,d_i,sigma,m,q,checkpoint\n";
  for (std::size_t i = 0; i < r.trace.states.size(); ++i) {
    const auto& row = rows[i];
    const bool cp = std::find(r.trace.checkpoints.begin(), r.trace.checkpoints.end(), i) != r.trace.checkpoints.end();
    csv << row["depth"].get<std::size_t>() << ',' << row["type"].get<std::string>() << ','
        << row["c"].get<std::string>() << ',' << row["jac_ratio"].get<std::string>() << ','
        << row["M"].get<std::string>() << ',' << row["d"].get<std::string>() << ','
        << (i > 0 ? std::to_string(r.trace.sigma_values[i - 1]) : std::string()) << ','
        << (i > 0 ? std::to_string(r.trace.steps[i - 1].m) : std::string()) << ','
        << (i > 0 ? std::to_string(r.trace.steps[i - 1].q) : std::string()) << ',' << (cp ? 1 : 0) << "\n";
  }
  csv << "# envelope " << (envelope ? "holds" : "violated") << "\n# " << r.bound.describe() << "\n";
  e.csv = csv.str();
  if (!envelope) throw consistency_error("synthesized trace violates the envelope");
  return e;
}

// ---- tower ----

Emitted tower_cmd(const RunConfig& cfg) {
  json in = json::object();
  if (cfg.input_path) in = parse_json(read_file(*cfg.input_path), *cfg.input_path);
  if (!in.is_object()) throw invalid_input("tower input must be an object");
  const std::string kind = in.contains("kind") ? in.at("kind").get<std::string>() : std::string("independent");
  const long p = long_field_or(in, "p", 2);
  std::size_t depth = static_cast<std::size_t>(long_field_or(in, "depth", 8));
  if (cfg.depth) depth = *cfg.depth;

  Emitted e;
  json& doc = e.doc;
  doc["kind"] = kind;
  doc["p"] = p;
  TowerTrace trace;
  if (kind == "independent") {
    trace = build_independent_tower(p, depth, long_field_or(in, "e", 1), long_field_or(in, "lambda_cap", 64));
  } else if (kind == "worked_example") {
    const long c = long_field_or(in, "c", p - 1);
    WorkedExample w = worked_example(p, c, depth);
    doc["c"] = c;
    doc["exact_lower"] = distance_to_json(w.lower);
    doc["exact_upper"] = distance_to_json(w.upper);
    for (std::size_t k = 0; k < w.d_lower.size(); ++k) {
      if (w.d_lower[k] != w.tower.d_lower[k] || w.d_upper[k] != w.tower.d_upper[k]) {
        throw consistency_error("recurrence and engine disagree at k = " + std::to_string(k + 1));
      }
    }
    trace = std::move(w.tower);
  } else {
    throw invalid_input("tower kind must be \"independent\" or \"worked_example\"");
  }
  if (!trace.links_ok()) throw consistency_error("tower link relation violated");
  const AuditReport audit = stable_form_audit(trace);
  json rows = json::array();
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    const auto& s = trace.states[k];
    const AuditRow* a = k < audit.rows.size() ? &audit.rows[k] : nullptr;
    rows.push_back({{"index", s.index},
                    {"types", {type_name(s.lower.type), type_name(s.upper.type)}},
                    {"c", s.lower.c().get_str()},
                    {"c_upper", s.upper.c().get_str()},
                    {"d_lower", trace.d_lower[k].str()},
                    {"d_upper", trace.d_upper[k].str()},
                    {"audit_flag", a ? json(a->not_strongly_monomial) : json(nullptr)},
                    {"kernel", a && a->kernel_outcome ? json(*a->kernel_outcome) : json(nullptr)}});
  }
  doc["rows"] = rows;
  doc["lower_bound"] = distance_to_json(trace.lower_bound);
  doc["upper_bound"] = distance_to_json(trace.upper_bound);
  doc["links_ok"] = trace.links_ok();
  doc["audit_mismatches"] = audit.mismatches;

  std::ostringstream csv;
  csv << "# p = " << p << "\n# kind = " << kind << "\n";
  csv << "index,lower_type,upper_type,c,c_upper,d_lower,d_upper,audit_flag\n";
  for (const auto& r : rows) {
    csv << r["index"].get<long>() << ',' << r["types"][0].get<std::string>() << ','
        << r["types"][1].get<std::string>() << ',' << r["c"].get<std::string>() << ','
        << r["c_upper"].get<std::string>() << ',' << r["d_lower"].get<std::string>() << ','
        << r["d_upper"].get<std::string>() << ','
        << (r["audit_flag"].is_null() ? std::string() : (r["audit_flag"].get<bool>() ? "1" : "0")) << "\n";
  }
  csv << "# lower " << trace.lower_bound.describe() << "\n# upper " << trace.upper_bound.describe() << "\n";
  e.csv = csv.str();
  if (audit.mismatches > 0) throw consistency_error("stable-form audit disagrees with the series kernel");
  return e;
}

// ---- oracle ----

Emitted oracle_cmd(const RunConfig& cfg, bool& failed) {
  OracleConfig oc;
  oc.seed = cfg.seed_rng;
  oc.precision = cfg.precision;
  oc.cases = cfg.cases;
  const OracleSummary s = run_oracle_suite(oc);

  Emitted e;
  json& doc = e.doc;
  doc["seed"] = cfg.seed_rng;
  doc["precision"] = cfg.precision;
  doc["cases"] = s.rows.size();
  doc["matches"] = s.matches;
  doc["mismatches"] = s.mismatches;
  doc["skipped"] = s.skipped;
  doc["flagged"] = s.flagged;
  doc["chain_rule_failures"] = s.chain_rule_failures;
  doc["complexity_failures"] = s.complexity_failures;
  doc["skip_rate"] = s.skip_rate();
  json rows = json::array();
  std::ostringstream csv;
  csv << "# seed = " << cfg.seed_rng << "\n# precision = " << cfg.precision << "\n";
  csv << "index,p,input_type,input_c,m,q,predicted_type,predicted_c,kernel_type,kernel_c,chain_rule,complexity,"
         "precision_used,status,note\n";
  for (const auto& r : s.rows) {
    rows.push_back({{"index", r.index},
                    {"p", r.p},
                    {"input_type", type_name(r.input_type)},
                    {"input_c", r.input_c},
                    {"m", r.step.m},
                    {"q", r.step.q},
                    {"predicted_type", type_name(r.predicted.type)},
                    {"predicted_c", r.predicted.c.get_str()},
                    {"kernel_type", germ_class_name(r.kernel_type)},
                    {"kernel_c", r.kernel_c},
                    {"chain_rule", r.chain_rule_ok},
                    {"complexity", r.complexity},
                    {"precision_used", r.precision_used},
                    {"status", case_status_name(r.status)},
                    {"note", r.note}});
    csv << r.index << ',' << r.p << ',' << type_name(r.input_type) << ',' << r.input_c << ',' << r.step.m << ','
        << r.step.q << ',' << type_name(r.predicted.type) << ',' << r.predicted.c.get_str() << ','
        << germ_class_name(r.kernel_type) << ',' << r.kernel_c << ',' << (r.chain_rule_ok ? 1 : 0) << ','
        << r.complexity << ',' << r.precision_used << ',' << case_status_name(r.status) << ','
        << csv_escape(r.note) << "\n";
  }
  doc["rows"] = rows;
  csv << "# match " << s.matches << " mismatch " << s.mismatches << " skipped " << s.skipped << " flagged "
      << s.flagged << "\n";
  e.csv = csv.str();
  failed = s.mismatches > 0 || s.chain_rule_failures > 0 || s.complexity_failures > 0;
  return e;
}

// ---- report ----

struct ReportRow {
  long p = 0;
  std::string c, hash;
  std::string lower, upper;
  bool exact = false;
  std::string source;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<ReportRow> rows_from_json(const json& doc, const std::string& source) {
  std::vector<ReportRow> out;
  auto one = [&](const json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("c") || !j.contains("schedule_hash") ||
        !j.contains("distance")) {
      throw invalid_input(source + ": expected fields p, c, schedule_hash and distance");
    }
    ReportRow r;
    r.p = j.at("p").get<long>();
    r.c = j.at("c").is_string() ? j.at("c").get<std::string>() : j.at("c").dump();
    r.hash = j.at("schedule_hash").get<std::string>();
    const json& d = j.at("distance");
    if (d.is_null()) {
      r.lower = r.upper = "";
    } else {
      if (!d.contains("lower") || !d.contains("upper")) throw invalid_input(source + ": distance needs lower/upper");
      r.lower = Rat::parse(d.at("lower").get<std::string>()).str();
      r.upper = Rat::parse(d.at("upper").get<std::string>()).str();
      r.exact = d.value("exact", false);
    }
    r.source = source;
    out.push_back(r);
  };
  if (doc.is_object() && doc.contains("rows") && !doc.contains("schedule_hash")) {
    for (const auto& j : doc.at("rows")) one(j);
  } else {
    one(doc);
  }
  return out;
}

std::vector<ReportRow> rows_from_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<ReportRow> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 3);
      continue;
    }
    auto cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      continue;
    }
    // A report table: one row per line.
    if (!header.empty() && header[0] == "p") {
      if (cells.size() != header.size()) throw invalid_input(source + ": ragged CSV row");
      std::map<std::string, std::string> row;
      for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
      ReportRow r;
      r.p = std::stol(row["p"]);
      r.c = row["c"];
      r.hash = row["schedule_hash"];
      r.lower = row["dist_lower"];
      r.upper = row["dist_upper"];
      r.exact = row["exact"] == "true";
      r.source = source;
      table.push_back(r);
    }
  }
  if (!header.empty() && header[0] == "p") {
    for (const char* k : {"c", "schedule_hash", "dist_lower", "dist_upper", "exact"}) {
      if (std::find(header.begin(), header.end(), k) == header.end()) {
        throw invalid_input(source + ": report CSV lacks column " + k);
      }
    }
    return table;
  }
  for (const char* k : {"p", "c", "schedule_hash"}) {
    if (!meta.count(k)) throw invalid_input(source + ": CSV lacks metadata line '# " + std::string(k) + " = ...'");
  }
  ReportRow r;
  try {
    r.p = std::stol(meta["p"]);
  } catch (const std::exception&) {
    throw invalid_input(source + ": p is not an integer");
  }
  r.c = meta["c"];
  r.hash = meta["schedule_hash"];
  if (meta.count("dist_lower")) {
    r.lower = Rat::parse(meta["dist_lower"]).str();
    r.upper = Rat::parse(meta.at("dist_upper")).str();
    r.exact = meta["exact"] == "true";
  }
  r.source = source;
  return {r};
}

Emitted report_cmd(const RunConfig& cfg) {
  std::map<std::tuple<long, std::string, std::string>, ReportRow> merged;
  std::vector<std::string> files = cfg.inputs;
  if (cfg.input_path) files.insert(files.begin(), *cfg.input_path);
  for (const auto& f : files) {
    const std::string text = read_file(f);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && (text[first] == '{' || text[first] == '[');
    const auto rows = is_json ? rows_from_json(parse_json(text, f), f) : rows_from_csv(text, f);
    for (const auto& r : rows) {
      const auto key = std::make_tuple(r.p, r.c, r.hash);
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(key, r);
      } else if (it->second.lower != r.lower || it->second.upper != r.upper || it->second.exact != r.exact) {
        throw consistency_error("inputs " + it->second.source + " and " + f + " disagree on schedule " + r.hash);
      }
    }
  }
  Emitted e;
  json rows = json::array();
  std::ostringstream csv;
  csv << "p,c,schedule_hash,dist_lower,dist_upper,exact,dist\n";
  for (const auto& [key, r] : merged) {
    std::string text = "undefined";
    if (!r.lower.empty()) {
      DistanceBound b = r.exact ? DistanceBound::point(Rat::parse(r.lower))
                                : DistanceBound::interval(Rat::parse(r.lower), Rat::parse(r.upper));
      text = b.describe();
    }
    rows.push_back({{"p", r.p},
                    {"c", r.c},
                    {"schedule_hash", r.hash},
                    {"distance", r.lower.empty() ? json(nullptr)
                                                 : json({{"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact},
                                                         {"text", text}})}});
    csv << r.p << ',' << r.c << ',' << r.hash << ',' << r.lower << ',' << r.upper << ','
        << (r.exact ? "true" : "false") << ',' << csv_escape(text) << "\n";
  }
  e.doc["rows"] = rows;
  e.csv = csv.str();
  return e;
}

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::input: return 1;
    case ErrorClass::infeasible: return 2;
    case ErrorClass::invariant: return 3;
  }
  return 3;
}

}  // namespace

ScheduleInput schedule_from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("schedule must be a JSON object");
  ScheduleInput in;
  in.p = long_field(j, "p");
  if (!j.contains("seed") || !j.at("seed").is_object()) throw invalid_input("missing object 'seed'");
  const json& seed = j.at("seed");
  if (!seed.contains("type") || !seed.at("type").is_string()) throw invalid_input("seed.type must be \"T1\" or \"T2\"");
  const GermType type = parse_type(seed.at("type").get<std::string>());
  in.seed = ExtensionState::seed(in.p, type, rat_field(seed, "jac_ratio"));
  if (j.contains("prefix")) in.schedule.prefix = steps_from_json(j.at("prefix"), "prefix");
  if (j.contains("tail") && !j.at("tail").is_null()) {
    in.schedule.tail = steps_from_json(j.at("tail"), "tail");
    if (in.schedule.tail->empty()) throw invalid_input("tail must be null or nonempty");
  }
  in.schedule.validate();
  return in;
}

json schedule_to_json(const ExtensionState& seed, const Schedule& schedule) {
  json j;
  j["p"] = seed.p;
  j["seed"] = {{"type", type_name(seed.type)}, {"jac_ratio", seed.jac_ratio.str()}};
  j["prefix"] = steps_to_json(schedule.prefix);
  j["tail"] = schedule.tail ? steps_to_json(*schedule.tail) : json(nullptr);
  return j;
}

std::string schedule_hash(const json& schedule) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : schedule.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json distance_to_json(const DistanceBound& b) {
  return {{"lower", b.lower.str()}, {"upper", b.upper.str()}, {"exact", b.exact}, {"text", b.describe()}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulator for quadratic-transform sequences in Artin-Schreier defect extensions"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  std::size_t depth = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "input file (default stdin)");
    sub->add_option("--output", cfg.output_path, "output file (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--depth", depth, "number of steps");
    sub->add_option("--precision", cfg.precision, "working truncation order (>= 8)");
    sub->add_option("--seed", cfg.seed_rng, "seed for randomized suites");
    sub->add_flag("--strict-mbar", cfg.strict_mbar, "require mbar > 1 on type-2 steps");
  };
  CLI::App* sim = app.add_subcommand("simulate", "run a schedule and report the trace");
  CLI::App* syn = app.add_subcommand("synthesize", "build a schedule with prescribed switching and distance");
  CLI::App* tow = app.add_subcommand("tower", "two-level towers and the stable-form audit");
  CLI::App* dis = app.add_subcommand("distance", "distance of a schedule only");
  CLI::App* ora = app.add_subcommand("oracle", "engine versus series-kernel equivalence suite");
  CLI::App* rep = app.add_subcommand("report", "merge prior outputs keyed by (p, c, schedule hash)");
  for (CLI::App* s : {sim, syn, tow, dis, ora, rep}) common(s);
  ora->add_option("--cases", cfg.cases, "number of random transitions");
  rep->add_option("inputs", cfg.inputs, "prior JSON or CSV outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--depth") > 0) cfg.depth = depth;
  cfg.format = format == "csv" ? Format::csv : Format::json;
  const std::map<CLI::App*, Command> commands{{sim, Command::simulate}, {syn, Command::synthesize},
                                              {tow, Command::tower},    {dis, Command::distance},
                                              {ora, Command::oracle},   {rep, Command::report}};
  cfg.command = commands.at(chosen);

  try {
    cfg.validate();
    bool failed = false;
    Emitted e;
    switch (cfg.command) {
      case Command::simulate: e = simulate(cfg, false); break;
      case Command::distance: e = simulate(cfg, true); break;
      case Command::synthesize: e = synthesize_cmd(cfg); break;
      case Command::tower: e = tower_cmd(cfg); break;
      case Command::oracle: e = oracle_cmd(cfg, failed); break;
      case Command::report: e = report_cmd(cfg); break;
    }
    const std::string text = cfg.format == Format::csv ? e.csv : e.doc.dump(2) + "\n";
    if (cfg.output_path) {
      std::ofstream f(*cfg.output_path);
      if (!f) throw invalid_input("cannot write " + *cfg.output_path);
      f << text;
    } else {
      out << text;
    }
    if (failed) {
      err << "error: oracle suite found mismatches or invariant failures\n";
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const json::exception& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace asdefect::cli
