#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quartz/data_matrix.hpp"
#include "quartz/sampling.hpp"

namespace quartz {

struct LoadedData {
  /// Columns already multiplied by their labels.
  DataMatrix matrix;
  std::vector<int> labels;
  /// Messages about recoverable oddities (duplicate feature indices).
  std::vector<std::string> warnings;
};

struct LibsvmOptions {
  bool normalize = false;
  /// Feature count; inferred as the largest index when unset.
  std::optional<std::size_t> features;
};

/// Parses "label idx:val ..." lines with 1-based feature indices and labels
/// in {+1, -1}. Blank lines and '#' comments are skipped. Throws DataError
/// with the offending line number.
LoadedData read_libsvm(std::istream& in, const LibsvmOptions& options = {});
LoadedData load_libsvm(const std::filesystem::path& path,
                       const LibsvmOptions& options = {});

/// Writes each column as a "+1" example with shortest round-trip values, so
/// read_libsvm(write_libsvm(M)) == M.
void write_libsvm(std::ostream& out, const DataMatrix& matrix);

/// Scales every nonzero column to unit Euclidean norm.
DataMatrix normalize_columns(const DataMatrix& matrix);

/// One line per group, whitespace-separated 0-based indices.
Partition read_partition(std::istream& in);
Partition load_partition(const std::filesystem::path& path);
void write_partition(std::ostream& out, const Partition& groups);

}  // namespace quartz
