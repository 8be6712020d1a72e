#pragma once

#include "toposim/inference.hpp"
#include "toposim/mixing.hpp"
#include "toposim/persistence.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace toposim {

/// Malformed input; the message carries the line number where known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g, so values round-trip exactly.
std::string format_double(double v);

/// Header "t,ch0,...,chP-1", then one row per sample (t is the sample index).
void write_series_csv(std::ostream& os, const MultivariateSeries& series);
MultivariateSeries read_series_csv(std::istream& is, double sampling_rate_hz);

/// "TSTS1", uint32 P, uint32 T, then the P x T matrix column-major as
/// float64, all little-endian.
void write_series_bin(std::ostream& os, const MultivariateSeries& series);
MultivariateSeries read_series_bin(std::istream& is, double sampling_rate_hz);

/// Picks the reader from the file's first bytes.
MultivariateSeries read_series_file(const std::string& path, double sampling_rate_hz);

/// Square matrix with a "node,0,1,..." header row and node-id first column.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

/// "dim,birth,death,essential" rows.
void write_diagram_csv(std::ostream& os, const PersistenceDiagram& pd);
PersistenceDiagram read_diagram_csv(std::istream& is, double death_cap);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
/// One row per bootstrap draw: group,draw,p0,p1,p2.
void write_bootstrap_csv(std::ostream& os, const BootstrapResult& r);
/// The per-replicate summaries the bootstrap resamples: group,replicate,p0,p1,p2.
void write_summaries_csv(std::ostream& os, const BootstrapResult& r);

/// Writes to a sibling temporary file and renames it over path, creating
/// parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace toposim
