#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::app {

// Columnar binary store for draw arrays. Layout, all integers and doubles
// little-endian regardless of host:
//   8 bytes   magic "FTVPCOL1"
//   u32       format version (1)
//   u32       number of columns C
//   u64       number of rows R
//   C times   u32 name length, name bytes (UTF-8, no terminator)
//   C times   R f64 values of the column
// A JSON sidecar at <path>.json repeats the shape and column names and
// carries free-form metadata.
inline constexpr uint32_t kStoreVersion = 1;

struct Table {
  std::vector<std::string> columns;
  Mat data;  // R x C
  nlohmann::json meta;

  int col(const std::string& name) const;  // -1 when absent
};

void write_table(const std::string& path, const Mat& data, const std::vector<std::string>& columns,
                 const nlohmann::json& meta = nlohmann::json::object());
// Throws Io on a bad magic, unknown version or truncated file.
Table read_table(const std::string& path);

// Bytes exactly as write_table would put them on disk.
std::string encode_table(const Mat& data, const std::vector<std::string>& columns);
Table decode_table(const std::string& bytes);

}  // namespace ftvp::app
