#include "nodetsp/encoding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nodetsp/error.hpp"
#include "nodetsp/instance_io.hpp"

namespace nodetsp {
namespace {

void require_enough_nodes(const TspInstance& inst, std::size_t k, std::size_t excluded) {
  if (k == 0) {
    throw Error(ErrorCode::kPrecondition, "neighbor count k must be >= 1");
  }
  if (inst.size() < k + excluded) {
    throw Error(ErrorCode::kInsufficientCandidates,
                "instance with " + std::to_string(inst.size()) +
                    " nodes cannot supply " + std::to_string(k) + " neighbors");
  }
}

FeatureRow make_row(const TspInstance& inst, int i, const std::vector<Neighbor>& picked) {
  FeatureRow row;
  row.row_id = i;
  row.cur = inst.nodes()[i];
  row.neighbors.reserve(picked.size());
  for (const Neighbor& nb : picked) {
    const Point loc = inst.nodes()[nb.index];
    row.neighbors.push_back({loc, distance(row.cur, loc)});
  }
  return row;
}

}  // namespace

std::vector<int> successors(const Tour& tour) {
  const std::size_t n = tour.size();
  std::vector<int> next(n);
  for (std::size_t p = 0; p < n; ++p) {
    next[tour.order[p]] = tour.order[(p + 1) % n];
  }
  return next;
}

FeatureTable encode_inference(const TspInstance& inst, std::size_t k) {
  require_enough_nodes(inst, k, 1);
  FeatureTable table{k, EncodingMode::kInference, {}};
  table.rows.reserve(inst.size());
  for (int i = 0; i < static_cast<int>(inst.size()); ++i) {
    const int self[] = {i};
    table.rows.push_back(make_row(inst, i, k_nearest(inst, inst.nodes()[i], k, self)));
  }
  return table;
}

FeatureTable encode_training(const TspInstance& inst, const Tour& reference,
                             std::size_t k, TrainingOptions options) {
  require_valid_tour(inst, reference);
  require_enough_nodes(inst, k, options.exclude_target_from_neighbors ? 2 : 1);
  const std::vector<int> next = successors(reference);
  FeatureTable table{k, EncodingMode::kTraining, {}};
  table.rows.reserve(inst.size());
  for (int i = 0; i < static_cast<int>(inst.size()); ++i) {
    const Point target = inst.nodes()[next[i]];
    std::vector<int> exclude{i};
    if (options.exclude_target_from_neighbors) exclude.push_back(next[i]);
    FeatureRow row = make_row(inst, i, k_nearest(inst, target, k, exclude));
    row.target = target;
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  const bool training = table.mode == EncodingMode::kTraining;
  out << "row_id,cur_x,cur_y";
  for (std::size_t j = 1; j <= table.k; ++j) {
    out << ",nb" << j << "_x,nb" << j << "_y,nb" << j << "_d";
  }
  if (training) out << ",next_x,next_y";
  out << '\n';
  for (const FeatureRow& row : table.rows) {
    out << row.row_id << ',' << format_double(row.cur.x) << ',' << format_double(row.cur.y);
    for (const NeighborFeature& nb : row.neighbors) {
      out << ',' << format_double(nb.location.x) << ',' << format_double(nb.location.y)
          << ',' << format_double(nb.dist_to_current);
    }
    if (training) {
      out << ',' << format_double(row.target->x) << ',' << format_double(row.target->y);
    }
    out << '\n';
  }
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_feature_csv(out, table);
}

std::vector<PredictionRow> read_prediction_csv(std::istream& in,
                                               std::size_t expected_rows) {
  auto fail = [](std::size_t line_no, const std::string& msg) -> Error {
    return Error(ErrorCode::kProtocol,
                 "prediction csv line " + std::to_string(line_no) + ": " + msg);
  };
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw fail(1, "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "row_id,pred_x,pred_y") {
    throw fail(line_no, "header must be 'row_id,pred_x,pred_y'");
  }

  std::vector<std::optional<PredictionRow>> by_id(expected_rows);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 3) throw fail(line_no, "expected 3 fields");

    long id = -1;
    auto [iptr, iec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
    if (iec != std::errc{} || iptr != fields[0].data() + fields[0].size()) {
      throw fail(line_no, "malformed row_id");
    }
    if (id < 0 || static_cast<std::size_t>(id) >= expected_rows) {
      throw fail(line_no, "unexpected row_id " + std::to_string(id));
    }
    double xy[2];
    for (int c = 0; c < 2; ++c) {
      const auto f = fields[c + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), xy[c]);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw fail(line_no, "malformed prediction '" + std::string(f) + "'");
      }
      if (!std::isfinite(xy[c])) throw fail(line_no, "non-finite prediction");
    }
    if (by_id[id]) throw fail(line_no, "duplicate row_id " + std::to_string(id));
    by_id[id] = PredictionRow{static_cast<int>(id), xy[0], xy[1]};
  }

  std::vector<PredictionRow> rows;
  rows.reserve(expected_rows);
  for (std::size_t i = 0; i < expected_rows; ++i) {
    if (!by_id[i]) {
      throw Error(ErrorCode::kProtocol, "prediction csv: missing row_id " + std::to_string(i));
    }
    rows.push_back(*by_id[i]);
  }
  return rows;
}

std::vector<PredictionRow> read_prediction_csv(const std::filesystem::path& path,
                                               std::size_t expected_rows) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kProtocol, "cannot open prediction csv " + path.string());
  return read_prediction_csv(in, expected_rows);
}

void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows) {
  out << "row_id,pred_x,pred_y\n";
  for (const auto& r : rows) {
    out << r.row_id << ',' << format_double(r.pred_x) << ',' << format_double(r.pred_y) << '\n';
  }
}

void write_prediction_csv(const std::filesystem::path& path,
                          const std::vector<PredictionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_prediction_csv(out, rows);
}

}  // namespace nodetsp
