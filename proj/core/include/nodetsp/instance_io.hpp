#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nodetsp/geometry.hpp"

namespace nodetsp {

struct LabeledInstance {
  TspInstance instance;
  std::optional<Tour> reference;
};

// kCanonical:
//   tsp <n> <id>
//   x y            (n lines)
//   tour i0 ... i{n-1}   (optional, 0-based)
// kCoordsOutput: one instance per line, "x0 y0 x1 y1 ... output t0 ... t0",
//   1-based closed tour whose last index repeats the first.
// kAuto picks canonical when the first non-blank line starts with "tsp".
enum class InstanceFormat { kAuto, kCanonical, kCoordsOutput };

std::vector<LabeledInstance> read_instances(std::istream& in,
                                            InstanceFormat format,
                                            const std::string& id_prefix = "");
std::vector<LabeledInstance> read_instances(const std::filesystem::path& path,
                                            InstanceFormat format = InstanceFormat::kAuto);

// Reads every regular file in a directory (sorted by name) or a single file.
std::vector<LabeledInstance> read_instance_set(const std::filesystem::path& path,
                                               InstanceFormat format = InstanceFormat::kAuto);

// Canonical format, coordinates in shortest round-trip decimal.
void write_instance(std::ostream& out, const TspInstance& inst,
                    const std::optional<Tour>& tour = std::nullopt);
void write_instance(const std::filesystem::path& path, const TspInstance& inst,
                    const std::optional<Tour>& tour = std::nullopt);

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace nodetsp
