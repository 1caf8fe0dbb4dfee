#include <charconv>
#include <fstream>
#include <sstream>

#include "dcflowgen/error.hpp"
#include "dcflowgen/schedule.hpp"

namespace dcflowgen {
namespace {

constexpr std::string_view kHeader = "start_seconds,src_id,dst_id,payload_bytes";

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

template <typename T>
void append_int(std::string& out, T v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error("schedule", "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_field(std::string_view& rest, std::size_t line, bool last,
              const char* name) {
  const auto comma = rest.find(',');
  if (last != (comma == std::string_view::npos)) {
    fail(line, "expected 4 comma-separated fields");
  }
  std::string_view field = last ? rest : rest.substr(0, comma);
  if (!field.empty() && field.back() == '\r') field.remove_suffix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      field.empty()) {
    fail(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  rest = last ? std::string_view{} : rest.substr(comma + 1);
  return value;
}

}  // namespace

std::string_view tool_version() {
#ifdef DCFLOWGEN_VERSION
  return DCFLOWGEN_VERSION;
#else
  return "unknown";
#endif
}

nlohmann::json to_json(const ScheduleMeta& meta) {
  nlohmann::json j;
  j["seed"] = meta.seed;
  j["config_digest"] = meta.config_digest;
  j["tool_version"] = meta.tool_version;
  j["racks"] = meta.racks;
  j["hosts_per_rack"] = meta.hosts_per_rack;
  j["epoch_length"] = meta.epoch_length;
  j["mapper"] = meta.mapper;
  auto& arr = j["epochs"] = nlohmann::json::array();
  for (const auto& e : meta.epochs) {
    arr.push_back({{"index", e.index},
                   {"flows", e.flows},
                   {"tm_bytes", e.tm_bytes},
                   {"epsilon", e.epsilon},
                   {"iat_scale", e.iat_scale},
                   {"attempts", e.attempts},
                   {"topsoe", e.topsoe}});
  }
  return j;
}

ScheduleMeta meta_from_json(const nlohmann::json& j) {
  ScheduleMeta m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.racks = j.at("racks").get<std::uint32_t>();
  m.hosts_per_rack = j.at("hosts_per_rack").get<std::uint32_t>();
  m.epoch_length = j.at("epoch_length").get<double>();
  m.mapper = j.at("mapper").get<std::string>();
  for (const auto& e : j.at("epochs")) {
    EpochMeta em;
    em.index = e.at("index").get<std::size_t>();
    em.flows = e.at("flows").get<std::size_t>();
    em.tm_bytes = e.at("tm_bytes").get<std::uint64_t>();
    em.epsilon = e.at("epsilon").get<double>();
    em.iat_scale = e.at("iat_scale").get<double>();
    em.attempts = e.at("attempts").get<std::size_t>();
    em.topsoe = e.at("topsoe").get<double>();
    m.epochs.push_back(em);
  }
  return m;
}

std::string format_schedule(const Schedule& s) {
  std::string out;
  out.reserve(64 + s.flows.size() * 32);
  out += "# ";
  out += to_json(s.meta).dump();
  out += '\n';
  out += kHeader;
  out += '\n';
  for (const auto& f : s.flows) {
    append_double(out, f.start_time);
    out += ',';
    append_int(out, f.src);
    out += ',';
    append_int(out, f.dst);
    out += ',';
    append_int(out, f.size);
    out += '\n';
  }
  return out;
}

Schedule parse_schedule(std::string_view text) {
  Schedule s;
  std::size_t line_no = 0;
  bool have_meta = false;
  bool have_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!have_meta) {
      if (line.substr(0, 2) != "# ") fail(line_no, "missing '# {meta}' line");
      try {
        s.meta = meta_from_json(nlohmann::json::parse(line.substr(2)));
      } catch (const nlohmann::json::exception& e) {
        fail(line_no, std::string("bad meta: ") + e.what());
      }
      have_meta = true;
      continue;
    }
    if (!have_header) {
      if (line != kHeader) {
        fail(line_no, "expected header '" + std::string(kHeader) + "'");
      }
      have_header = true;
      continue;
    }
    MappedFlow f;
    std::string_view rest = line;
    f.start_time = parse_field<double>(rest, line_no, false, "start_seconds");
    f.src = parse_field<NodeId>(rest, line_no, false, "src_id");
    f.dst = parse_field<NodeId>(rest, line_no, false, "dst_id");
    f.size = parse_field<std::uint64_t>(rest, line_no, true, "payload_bytes");
    if (f.src == f.dst) fail(line_no, "src equals dst");
    if (!s.flows.empty() && f.start_time < s.flows.back().start_time) {
      fail(line_no, "start times not sorted");
    }
    s.flows.push_back(f);
  }
  if (!have_meta || !have_header) {
    fail(line_no + 1, "truncated schedule");
  }
  return s;
}

void write_schedule(const std::filesystem::path& path, const Schedule& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("schedule", "cannot write " + path.string());
  const auto text = format_schedule(s);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("schedule", "write failed for " + path.string());
}

Schedule read_schedule(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("schedule", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schedule(buf.str());
}

}  // namespace dcflowgen
