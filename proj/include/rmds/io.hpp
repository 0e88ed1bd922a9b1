#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rmds/bench.hpp"
#include "rmds/edm.hpp"
#include "rmds/solver.hpp"

namespace rmds {
namespace io {

// Matrix CSV: one row per line, %.17g decimal fields, no header.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(std::istream& in, const std::string& name = "<stream>");
Matrix read_matrix_csv(const std::string& path);

// Point-cloud CSV: same field format with an x,y,... header row.
void write_points_csv(std::ostream& out, const Matrix& pts, bool header = true);
void write_points_csv(const std::string& path, const Matrix& pts, bool header = true);
// Reads a matrix, skipping one header line when the first field is not numeric.
Matrix read_points_csv(const std::string& path);

// Sparse triplet CSV with an "i,j,value" header; 0-based upper-triangular
// indices, %.17g values.
void write_triplets_csv(std::ostream& out, const SparseSymmetric& s);
void write_triplets_csv(const std::string& path, const SparseSymmetric& s);
SparseSymmetric read_triplets_csv(const std::string& path, int n);

// Experiment tables and traces; floats use %.10g.
void write_success_table_csv(std::ostream& out, const std::vector<SuccessCell>& cells);
void write_success_table_csv(const std::string& path, const std::vector<SuccessCell>& cells);
void write_rmse_table_csv(std::ostream& out, const std::vector<RmseCell>& cells);
void write_rmse_table_csv(const std::string& path, const std::vector<RmseCell>& cells);
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
void write_trace_csv(const std::string& path, const SolverTrace& trace);

std::string format_full(double v);   // %.17g
std::string format_short(double v);  // %.10g

}  // namespace io
}  // namespace rmds
