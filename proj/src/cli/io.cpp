#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "detail.hpp"

namespace ptdilate::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json metadata(const RunConfig& cfg, std::string_view command) {
  const nlohmann::json config = cfg.to_json();
  nlohmann::json meta;
  meta["tool"] = "ptdilate";
  meta["version"] = kVersion;
  meta["command"] = std::string(command);
  meta["config"] = config;
  meta["config_hash"] = "fnv1a64:" + fnv1a_hex(config.dump());
  meta["seed"] = cfg.seed;
  meta["noise_generator"] = kNoiseGenerator;
  return meta;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no, std::size_t column) {
  std::string s = cell;
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = s.find_first_not_of(' ');
  if (start == std::string::npos) start = s.size();
  double v = 0.0;
  const auto res = std::from_chars(s.data() + start, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || start == s.size()) {
    throw SchemaError("line " + std::to_string(line_no) + ", column " + std::to_string(column + 1) +
                      ": '" + cell + "' is not a number");
  }
  return v;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line_no == 1) {
        try {
          table.meta = nlohmann::json::parse(line.substr(1));
        } catch (const nlohmann::json::exception&) {
          throw SchemaError(path.string() + ": metadata line is not valid JSON");
        }
      }
      continue;
    }
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw SchemaError(path.string() + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " columns, header has " +
                        std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(parse_number(cells[c], line_no, c));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw SchemaError(path.string() + ": no header line");
  return table;
}

namespace detail {

CsvWriter::CsvWriter(const nlohmann::json& meta, const std::vector<std::string>& header) {
  text_ = "# " + meta.dump() + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  if (n == 0) return;
  unsigned pool = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  pool = static_cast<unsigned>(std::min<std::size_t>(pool, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < pool; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string r_tag(double r) { return "r" + format_double(r); }

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

}  // namespace detail

}  // namespace ptdilate::cli
