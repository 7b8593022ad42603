#include "nodetsp/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nodetsp/error.hpp"

namespace nodetsp {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + msg);
}

double parse_coord(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "malformed number '" + std::string(tok) + "'");
  }
  if (!(v >= 0.0 && v <= 1.0)) {
    parse_fail(line_no, "coordinate " + std::string(tok) + " outside [0,1]");
  }
  return v;
}

long parse_int(std::string_view tok, std::size_t line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "malformed integer '" + std::string(tok) + "'");
  }
  return v;
}

Tour checked_tour(const TspInstance& inst, std::vector<int> order,
                  std::size_t line_no) {
  Tour tour{std::move(order)};
  if (auto verdict = validate_tour(inst, tour); !verdict.valid()) {
    parse_fail(line_no, "tour is not a permutation: " + verdict.message);
  }
  return tour;
}

std::vector<LabeledInstance> read_canonical(std::istream& in,
                                            const std::string& id_prefix) {
  std::vector<LabeledInstance> out;
  std::string line;
  std::size_t line_no = 0;

  std::vector<Point> pending;
  std::size_t expected = 0;
  std::string pending_id;
  std::size_t header_line = 0;
  bool in_instance = false;

  auto finish = [&](std::optional<Tour> tour) {
    out.push_back({TspInstance(std::move(pending), pending_id), std::move(tour)});
    pending.clear();
    in_instance = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (in_instance && pending.size() < expected) {
      if (tokens.size() != 2) parse_fail(line_no, "expected 'x y'");
      pending.push_back({parse_coord(tokens[0], line_no), parse_coord(tokens[1], line_no)});
      continue;
    }
    if (tokens[0] == "tour") {
      if (!in_instance) parse_fail(line_no, "'tour' line without a preceding instance");
      std::vector<int> order;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        order.push_back(static_cast<int>(parse_int(tokens[t], line_no)));
      }
      TspInstance inst(pending, pending_id);
      Tour tour = checked_tour(inst, std::move(order), line_no);
      out.push_back({std::move(inst), std::move(tour)});
      pending.clear();
      in_instance = false;
      continue;
    }
    if (tokens[0] == "tsp") {
      if (in_instance) finish(std::nullopt);
      if (tokens.size() < 2 || tokens.size() > 3) {
        parse_fail(line_no, "header must be 'tsp <n> <id>'");
      }
      const long n = parse_int(tokens[1], line_no);
      if (n < 3) parse_fail(line_no, "instance size must be >= 3");
      expected = static_cast<std::size_t>(n);
      pending_id = tokens.size() == 3 ? std::string(tokens[2])
                                      : id_prefix + std::to_string(out.size());
      header_line = line_no;
      in_instance = true;
      pending.reserve(expected);
      continue;
    }
    parse_fail(line_no, "unexpected line '" + line + "'");
  }
  if (in_instance) {
    if (pending.size() < expected) {
      parse_fail(header_line, "instance declares " + std::to_string(expected) +
                                  " nodes but only " + std::to_string(pending.size()) +
                                  " follow");
    }
    finish(std::nullopt);
  }
  return out;
}

std::vector<LabeledInstance> read_coords_output(std::istream& in,
                                                const std::string& id_prefix) {
  std::vector<LabeledInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const auto marker = std::find(tokens.begin(), tokens.end(), "output");
    if (marker == tokens.end()) parse_fail(line_no, "missing 'output' token");
    const auto n_coords = static_cast<std::size_t>(marker - tokens.begin());
    if (n_coords % 2 != 0) parse_fail(line_no, "odd number of coordinates");
    const std::size_t n = n_coords / 2;
    if (n < 3) parse_fail(line_no, "instance size must be >= 3");

    std::vector<Point> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i] = {parse_coord(tokens[2 * i], line_no),
                  parse_coord(tokens[2 * i + 1], line_no)};
    }
    std::vector<int> closed;
    for (auto it = marker + 1; it != tokens.end(); ++it) {
      closed.push_back(static_cast<int>(parse_int(*it, line_no)) - 1);
    }
    if (closed.size() != n + 1 || closed.front() != closed.back()) {
      parse_fail(line_no, "tour must list n+1 indices with the first repeated last");
    }
    closed.pop_back();
    TspInstance inst(std::move(nodes), id_prefix + std::to_string(line_no));
    Tour tour = checked_tour(inst, std::move(closed), line_no);
    out.push_back({std::move(inst), std::move(tour)});
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<LabeledInstance> read_instances(std::istream& in,
                                            InstanceFormat format,
                                            const std::string& id_prefix) {
  if (format == InstanceFormat::kAuto) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    format = InstanceFormat::kCanonical;
    std::istringstream probe(text);
    std::string line;
    while (std::getline(probe, line)) {
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens[0] != "tsp") format = InstanceFormat::kCoordsOutput;
      break;
    }
    std::istringstream replay(text);
    return read_instances(replay, format, id_prefix);
  }
  return format == InstanceFormat::kCanonical ? read_canonical(in, id_prefix)
                                              : read_coords_output(in, id_prefix);
}

std::vector<LabeledInstance> read_instances(const std::filesystem::path& path,
                                            InstanceFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return read_instances(in, format, path.stem().string() + "-");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) {
      throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    throw;
  }
}

std::vector<LabeledInstance> read_instance_set(const std::filesystem::path& path,
                                               InstanceFormat format) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return read_instances(path, format);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LabeledInstance> all;
  for (const auto& f : files) {
    auto part = read_instances(f, format);
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return all;
}

void write_instance(std::ostream& out, const TspInstance& inst,
                    const std::optional<Tour>& tour) {
  const std::string id = inst.id().empty() ? "unnamed" : inst.id();
  out << "tsp " << inst.size() << ' ' << id << '\n';
  for (const Point& p : inst.nodes()) {
    out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  }
  if (tour) {
    require_valid_tour(inst, *tour);
    out << "tour";
    for (int v : tour->order) out << ' ' << v;
    out << '\n';
  }
}

void write_instance(const std::filesystem::path& path, const TspInstance& inst,
                    const std::optional<Tour>& tour) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_instance(out, inst, tour);
}

}  // namespace nodetsp
