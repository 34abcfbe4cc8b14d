#include "wdsched/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace wdsched {

Json rational_to_json(const Rational& r) {
  auto [n, d] = to_pair(r);
  return Json::array({n, d});
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("rational must be [num, den]");
  return make_rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
}

Scenario scenario_from_json(const Json& j) {
  try {
    std::vector<NodeId> nodes = j.at("nodes").get<std::vector<NodeId>>();
    std::vector<Link> links;
    for (const Json& l : j.at("links")) {
      if (!l.is_array() || l.size() != 4) throw std::invalid_argument("link must be [src, dst, c_num, c_den]");
      links.push_back({l[0].get<NodeId>(), l[1].get<NodeId>(),
                       make_rational(l[2].get<std::int64_t>(), l[3].get<std::int64_t>())});
    }
    Scenario scn{NetworkGraph(std::move(nodes), std::move(links)), InterferenceModel{j.at("phi").get<int>()}, {}};
    if (scn.model.phi < 0) throw std::invalid_argument("phi must be nonnegative");
    int id = 1;
    for (const Json& fj : j.at("flows")) {
      Flow f;
      f.id = id++;
      f.src = fj.at("src").get<NodeId>();
      f.dst = fj.at("dst").get<NodeId>();
      f.lambda = rational_from_json(fj.at("lambda"));
      f.tau = fj.at("tau").get<int>();
      if (fj.contains("route")) {
        f.route = fj["route"].get<std::vector<LinkId>>();
        for (LinkId e : f.route) {
          if (e >= scn.net.num_links()) throw std::invalid_argument("route names unknown link " + std::to_string(e));
        }
      } else {
        f.route = shortest_route(scn.net, f.src, f.dst);
      }
      scn.flows.push_back(std::move(f));
    }
    return scn;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
}

Json scenario_to_json(const Scenario& scn) {
  Json j;
  j["nodes"] = scn.net.nodes();
  Json links = Json::array();
  for (const Link& l : scn.net.links()) {
    auto [n, d] = to_pair(l.capacity);
    links.push_back({l.src, l.dst, n, d});
  }
  j["links"] = links;
  j["phi"] = scn.model.phi;
  Json flows = Json::array();
  for (const Flow& f : scn.flows) {
    Json fj;
    fj["src"] = f.src;
    fj["dst"] = f.dst;
    fj["lambda"] = rational_to_json(f.lambda);
    fj["tau"] = f.tau;
    fj["route"] = f.route;
    flows.push_back(fj);
  }
  j["flows"] = flows;
  return j;
}

Json schedule_to_json(const CyclicSchedule& schedule) {
  Json j;
  j["period"] = schedule.period();
  j["slots"] = schedule.slots;
  return j;
}

CyclicSchedule schedule_from_json(const Json& j) {
  try {
    CyclicSchedule s;
    s.slots = j.at("slots").get<std::vector<std::vector<LinkId>>>();
    if (j.contains("period") && j["period"].get<std::int64_t>() != s.period()) {
      throw std::invalid_argument("period does not match the slot list");
    }
    if (s.slots.empty()) throw std::invalid_argument("schedule has no slots");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed schedule: ") + e.what());
  }
}

Json coloring_to_json(const ColoringInstance& inst, const WgcResult& wgc) {
  Json j;
  j["sets"] = class_links(inst, wgc.coloring);
  j["k"] = wgc.assignment.k_set;
  return j;
}

Json slices_to_json(const SliceAssignment& slices) {
  Json arr = Json::array();
  for (const auto& [key, w] : slices.entries()) {
    Json e;
    e["flow"] = key.first;
    e["link"] = key.second;
    e["width"] = rational_to_json(w);
    arr.push_back(e);
  }
  Json j;
  j["widths"] = arr;
  return j;
}

SliceAssignment slices_from_json(const Json& j) {
  try {
    SliceAssignment s;
    for (const Json& e : j.at("widths")) {
      s.set(e.at("flow").get<std::size_t>(), e.at("link").get<LinkId>(), rational_from_json(e.at("width")));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed slices: ") + e.what());
  }
}

Json solve_summary(const Scenario& scn, const SolveResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["stage"] = to_string(r.failed);
  j["message"] = r.message;
  j["binding_flows"] = r.binding_flows;
  Json viol = Json::array();
  for (const auto& v : r.violations) {
    viol.push_back({{"kind", to_string(v.kind)}, {"flow", v.flow}, {"link", v.link}, {"message", v.message}});
  }
  j["violations"] = viol;
  if (!r.wgc.coloring.sets.empty()) {
    j["colors"] = r.wgc.coloring.sets.size();
    j["wgc_iterations"] = r.wgc.iterations;
  }
  if (!r.wgc.assignment.k_set.empty()) {
    j["k"] = r.wgc.assignment.k_set;
    j["objective"] = to_string(r.wgc.assignment.objective);
  }
  if (r.schedule.period() > 0) {
    j["period"] = r.schedule.period();
    j["pinwheel_method"] = r.pinwheel.method;
  }
  Json flows = Json::array();
  for (std::size_t i = 0; i < r.support.size(); ++i) {
    const auto& v = r.support[i];
    Json fj;
    fj["flow"] = v.flow;
    fj["tau"] = scn.flows[i].tau;
    fj["supported"] = v.supported;
    fj["max_delay"] = v.max_delay;
    Rational route_width = 0;
    for (LinkId e : scn.flows[i].route) {
      auto it = r.slices.entries().find({i, e});
      if (it != r.slices.entries().end()) route_width += it->second;
    }
    if (route_width > 0) fj["zeta"] = to_double(scn.flows[i].lambda * v.max_delay / route_width);
    fj["max_backlog"] = to_string(v.max_backlog);
    fj["backlog_limit"] = to_string(v.backlog_limit);
    if (i < r.deficits.size()) {
      const auto& d = r.deficits[i];
      fj["kbar"] = d.kbar;
      fj["kbar_sum"] = d.kbar_sum;
      fj["width_bound_holds"] = d.width_bound_holds;
      fj["deficit_violations"] = d.violations.size();
    }
    flows.push_back(fj);
  }
  j["flows"] = flows;
  return j;
}

std::string run_length(const CyclicSchedule& schedule) {
  std::ostringstream os;
  auto set_text = [](const std::vector<LinkId>& s) {
    std::string t = "{";
    for (std::size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + std::to_string(s[i]);
    return t + "}";
  };
  std::size_t i = 0;
  bool first = true;
  while (i < schedule.slots.size()) {
    std::size_t j = i;
    while (j < schedule.slots.size() && schedule.slots[j] == schedule.slots[i]) ++j;
    os << (first ? "" : " ") << (j - i) << "x" << set_text(schedule.slots[i]);
    first = false;
    i = j;
  }
  return os.str();
}

void write_trace_csv(std::ostream& os, const Scenario& scn, const SimTrace& trace) {
  os << "slot,flow,link,volume\n";
  std::int64_t slots = 0;
  for (const auto& f : trace.flows) slots = std::max<std::int64_t>(slots, static_cast<std::int64_t>(f.queue_log.size()));
  for (std::int64_t t = 0; t < slots; ++t) {
    for (std::size_t i = 0; i < trace.flows.size(); ++i) {
      const FlowTrace& f = trace.flows[i];
      if (t >= static_cast<std::int64_t>(f.queue_log.size())) continue;
      const auto& row = f.queue_log[static_cast<std::size_t>(t)];
      for (std::size_t h = 0; h < row.size(); ++h) {
        Rational v = Rational(from_int128(row[h])) * f.unit;
        os << t << ',' << f.flow << ',' << scn.flows[i].route[h] << ',' << to_string(v) << '\n';
      }
    }
  }
}

void write_sweep_header(std::ostream& os) {
  os << "fraction,lambda,lambda_star,lambda_star_source,normalized,tau,seed,feasible,stage,max_delay,colors,period,"
        "message\n";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace

void write_sweep_row(std::ostream& os, const SweepRow& r) {
  std::ostringstream norm;
  norm << std::setprecision(6) << std::fixed << (r.lambda_star > 0 ? to_double(r.lambda / r.lambda_star) : 0.0);
  os << to_string(r.fraction) << ',' << to_string(r.lambda) << ',' << to_string(r.lambda_star) << ','
     << r.lambda_star_source << ',' << norm.str() << ',' << r.tau << ',' << r.seed << ',' << (r.feasible ? 1 : 0)
     << ',' << to_string(r.stage) << ',' << r.max_delay << ',' << r.colors << ',' << r.period << ','
     << csv_escape(r.message) << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("fraction,", 0) != 0) throw std::invalid_argument("not a sweep CSV");
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto c = csv_split(line);
    if (c.size() != 13) throw std::invalid_argument("sweep row has " + std::to_string(c.size()) + " fields");
    SweepRow r;
    r.fraction = parse_rational(c[0]);
    r.lambda = parse_rational(c[1]);
    r.lambda_star = parse_rational(c[2]);
    r.lambda_star_source = c[3];
    r.tau = std::stoi(c[5]);
    r.seed = std::stoull(c[6]);
    r.feasible = c[7] == "1";
    r.stage = stage_from_string(c[8]);
    r.max_delay = std::stoll(c[9]);
    r.colors = std::stoull(c[10]);
    r.period = std::stoll(c[11]);
    r.message = c[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

}  // namespace wdsched
