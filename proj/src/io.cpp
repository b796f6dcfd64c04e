#include "ehbc/io.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ehbc/errors.hpp"

namespace ehbc {
namespace {

using nlohmann::json;

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_number()) {
    throw ParseError(std::string("field \"") + key + "\" must be a number");
  }
  return v.get<double>();
}

}  // namespace

double seconds_per(TimeUnit unit) {
  return unit == TimeUnit::Hours ? 3600.0 : 1.0;
}

ProblemInstance instance_from_json(const json& j, TimeUnit unit) {
  ProblemInstance inst;
  const json& bits = member(j, "bits");
  if (!bits.is_array() || bits.size() != 2 || !bits[0].is_number() ||
      !bits[1].is_number()) {
    throw ParseError("\"bits\" must be an array [B1, B2]");
  }
  inst.bits1 = bits[0].get<double>();
  inst.bits2 = bits[1].get<double>();

  const json& hs = member(j, "harvests");
  if (!hs.is_array()) {
    throw ParseError("\"harvests\" must be an array");
  }
  const double scale = seconds_per(unit);
  for (const json& h : hs) {
    inst.harvests.push_back({number(h, "t") * scale, number(h, "E")});
  }

  const json& ch = member(j, "channel");
  if (ch.contains("W_hz")) {
    PhysicalUnits phys;
    phys.bandwidth_hz = number(ch, "W_hz");
    phys.noise_density = number(ch, "N0");
    const json& pl = member(ch, "pathloss_db");
    if (!pl.is_array() || pl.size() != 2 || !pl[0].is_number() || !pl[1].is_number()) {
      throw ParseError("\"pathloss_db\" must be an array [PL1, PL2]");
    }
    phys.pathloss_db = {pl[0].get<double>(), pl[1].get<double>()};
    inst.units = phys;
  } else {
    inst.channel.s1 = number(ch, "s1");
    inst.channel.s2 = number(ch, "s2");
    inst.channel.sigma2 = number(ch, "sigma2");
  }
  inst.validate();
  return inst;
}

json instance_to_json(const ProblemInstance& inst) {
  json j;
  j["bits"] = {inst.bits1, inst.bits2};
  json hs = json::array();
  for (const Harvest& h : inst.harvests) {
    hs.push_back({{"t", h.time}, {"E", h.energy}});
  }
  j["harvests"] = hs;
  if (const auto* phys = std::get_if<PhysicalUnits>(&inst.units)) {
    j["channel"] = {{"W_hz", phys->bandwidth_hz},
                    {"N0", phys->noise_density},
                    {"pathloss_db", {phys->pathloss_db[0], phys->pathloss_db[1]}}};
  } else {
    j["channel"] = {{"s1", inst.channel.s1},
                    {"s2", inst.channel.s2},
                    {"sigma2", inst.channel.sigma2}};
  }
  return j;
}

json schedule_to_json(const Schedule& schedule, const SolveDiagnostics* diag) {
  json j;
  j["T"] = schedule.completion_time;
  j["rate_scale"] = schedule.rate_scale;
  j["epochs_used"] = schedule.epochs_used();
  j["unused_harvests"] = schedule.unused_harvests;
  if (diag != nullptr) {
    j["T_initial"] = diag->t_history.empty() ? 0.0 : diag->t_history.front();
    j["iterations"] = diag->iterations;
    j["stop_reason"] = to_string(diag->stop_reason);
    j["deferred_start"] = diag->deferred_start;
    j["t_history"] = diag->t_history;
    j["epochs_used_history"] = diag->epochs_used_history;
  }
  json segs = json::array();
  for (const Segment& s : schedule.segments()) {
    segs.push_back({{"t_start", s.t_start},
                    {"t_end", s.t_end},
                    {"power_W", s.power},
                    {"r1", s.rate1 * schedule.rate_scale},
                    {"r2", s.rate2 * schedule.rate_scale}});
  }
  j["segments"] = segs;
  return j;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  s.rate_scale = j.contains("rate_scale") ? number(j, "rate_scale") : 1.0;
  if (!(s.rate_scale > 0.0)) {
    throw ParseError("\"rate_scale\" must be positive");
  }
  const json& segs = member(j, "segments");
  if (!segs.is_array()) {
    throw ParseError("\"segments\" must be an array");
  }
  for (const json& seg : segs) {
    EpochState e;
    e.start = number(seg, "t_start");
    const double end = number(seg, "t_end");
    e.duration = e.active = end - e.start;
    if (!(e.active > 0.0)) {
      throw ParseError("segment with nonpositive duration");
    }
    e.energy = number(seg, "power_W") * e.active;
    e.rates = {number(seg, "r1") / s.rate_scale, number(seg, "r2") / s.rate_scale};
    e.bits1 = e.rates.r1 * e.active;
    e.bits2 = e.rates.r2 * e.active;
    s.epochs.push_back(e);
  }
  s.completion_time = completion_time(s);
  if (j.contains("unused_harvests") && j["unused_harvests"].is_array()) {
    s.unused_harvests = j["unused_harvests"].get<std::vector<std::size_t>>();
  }
  return s;
}

json report_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    json item = {{"name", c.name},
                 {"pass", c.pass},
                 {"worst_residual", c.worst_residual},
                 {"seed", c.seed}};
    if (!c.detail.empty()) {
      item["detail"] = c.detail;
    }
    checks.push_back(item);
  }
  return {{"checks", checks}, {"all_pass", report.all_pass()}};
}

void write_csv(std::ostream& out, const Schedule& schedule) {
  out << "t_start,t_end,power_W,r1,r2,cum_b1,cum_b2\n";
  out << std::setprecision(17);
  double cum1 = 0.0;
  double cum2 = 0.0;
  for (const Segment& s : schedule.segments()) {
    const double r1 = s.rate1 * schedule.rate_scale;
    const double r2 = s.rate2 * schedule.rate_scale;
    cum1 += r1 * s.duration();
    cum2 += r2 * s.duration();
    out << s.t_start << ',' << s.t_end << ',' << s.power << ',' << r1 << ','
        << r2 << ',' << cum1 << ',' << cum2 << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) {
    throw ParseError("cannot write " + path);
  }
}

}  // namespace ehbc
