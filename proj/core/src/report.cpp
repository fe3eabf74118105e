#include "lgt/report.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "lgt/errors.hpp"

namespace lgt {

namespace {

using nlohmann::json;

std::string shortest(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

json potential_to_json(const PotentialBreakdown& p) {
  return json{{"deactivation_term", p.deactivation_term},
              {"entropy_term", p.entropy_term},
              {"time_term", p.time_term},
              {"total", p.total}};
}

json trace_to_json(const Trace& trace) {
  json steps = json::array();
  for (const auto& step : trace.steps) {
    json deactivations = json::array();
    for (const auto& record : step.deactivations) {
      deactivations.push_back({{"leaf", raw(record.leaf)}, {"d", record.d}});
    }
    steps.push_back({{"t", step.t},
                     {"layer_size", step.layer_size},
                     {"deactivations", std::move(deactivations)},
                     {"deactivated_edges", step.deactivated_edges},
                     {"cost_delta", step.cost_delta},
                     {"cumulative_cost", step.cumulative_cost},
                     {"opt", step.opt},
                     {"ratio", step.ratio},
                     {"potential", step.potential ? potential_to_json(*step.potential) : json()}});
  }
  return json{{"run_id", trace.run_id},
              {"policy", to_string(trace.policy)},
              {"instance", trace.instance},
              {"width", trace.width},
              {"width_source", to_string(trace.width_source)},
              {"steps", std::move(steps)}};
}

Trace trace_from_json(const json& j) {
  Trace trace;
  trace.run_id = j.at("run_id").get<std::string>();
  const auto policy = parse_policy_kind(j.at("policy").get<std::string>());
  if (!policy) throw ParseError("policy", 0, "unknown policy");
  trace.policy = *policy;
  trace.instance = j.at("instance").get<std::string>();
  trace.width = j.at("width").get<std::size_t>();
  const auto source = parse_width_source(j.at("width_source").get<std::string>());
  if (!source) throw ParseError("width_source", 0, "unknown width source");
  trace.width_source = *source;
  for (const auto& s : j.at("steps")) {
    StepRecord step;
    step.t = s.at("t").get<std::size_t>();
    step.layer_size = s.at("layer_size").get<std::size_t>();
    for (const auto& d : s.at("deactivations")) {
      step.deactivations.push_back({NodeId{d.at("leaf").get<std::uint64_t>()}, d.at("d").get<std::size_t>()});
    }
    step.deactivated_edges = s.at("deactivated_edges").get<std::size_t>();
    step.cost_delta = s.at("cost_delta").get<double>();
    step.cumulative_cost = s.at("cumulative_cost").get<double>();
    step.opt = s.at("opt").get<std::size_t>();
    step.ratio = s.at("ratio").get<double>();
    if (const auto& p = s.at("potential"); !p.is_null()) {
      step.potential = PotentialBreakdown{p.at("deactivation_term").get<double>(),
                                          p.at("entropy_term").get<double>(),
                                          p.at("time_term").get<double>(), p.at("total").get<double>()};
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  return std::nullopt;
}

std::string to_csv(std::span<const Trace> traces) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const auto& trace : traces) {
    const std::string prefix = csv_field(trace.run_id) + ',' +
                               csv_field(to_string(trace.policy)) + ',' +
                               csv_field(trace.instance) + ',';
    for (const auto& step : trace.steps) {
      out += prefix;
      out += std::to_string(step.t) + ',' + std::to_string(step.layer_size) + ',' +
             std::to_string(step.deactivated_edges) + ',';
      out += shortest(step.cost_delta) + ',' + shortest(step.cumulative_cost) + ',';
      out += std::to_string(step.opt) + ',' + shortest(step.ratio) + ',';
      if (step.potential) out += shortest(step.potential->total) + ',' + shortest(*step.slack());
      else out += ',';
      out += '\n';
    }
  }
  return out;
}

std::string to_json(std::span<const Trace> traces) {
  json all = json::array();
  for (const auto& trace : traces) all.push_back(trace_to_json(trace));
  return json{{"traces", std::move(all)}}.dump(2) + "\n";
}

std::vector<Trace> traces_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", 0, e.what());
  }
  std::vector<Trace> traces;
  try {
    for (const auto& j : doc.at("traces")) traces.push_back(trace_from_json(j));
  } catch (const json::exception& e) {
    throw ParseError("traces", 0, e.what());
  }
  return traces;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + temp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("failed writing " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError("cannot move report into " + path.string());
  }
}

void write_report(std::span<const Trace> traces, ReportFormat format,
                  const std::filesystem::path& path) {
  write_file_atomic(path, format == ReportFormat::csv ? to_csv(traces) : to_json(traces));
}

}  // namespace lgt
