#include "rmds/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rmds {
namespace io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open for reading: " + path);
  return f;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto f = open_out(path);
  write_matrix_csv(f, m);
}

Matrix read_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        std::ostringstream msg;
        msg << name << ": cannot parse field at row " << lineno << ", column "
            << (c + 1) << ": '" << fields[c] << "'";
        throw ValidationError(msg.str());
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << name << ": row " << lineno << " has " << row.size()
          << " fields, expected " << rows.front().size();
      throw ValidationError(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(name + ": empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  auto f = open_in(path);
  return read_matrix_csv(f, path);
}

void write_points_csv(std::ostream& out, const Matrix& pts, bool header) {
  if (header) {
    static const char* names[] = {"x", "y", "z"};
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      if (j > 0) out << ',';
      if (j < 3) {
        out << names[j];
      } else {
        out << 'c' << j;
      }
    }
    out << '\n';
  }
  write_matrix_csv(out, pts);
}

void write_points_csv(const std::string& path, const Matrix& pts, bool header) {
  auto f = open_out(path);
  write_points_csv(f, pts, header);
}

Matrix read_points_csv(const std::string& path) {
  auto f = open_in(path);
  std::string first;
  if (!std::getline(f, first)) throw ValidationError(path + ": empty points file");
  double probe = 0.0;
  const auto fields = split_fields(first);
  std::stringstream rest;
  if (fields.empty() || !parse_double(fields.front(), probe)) {
    // header line; skip it
  } else {
    rest << first << '\n';
  }
  if (f.peek() != std::char_traits<char>::eof()) rest << f.rdbuf();
  rest.clear();  // inserting an exhausted rdbuf would leave failbit set
  return read_matrix_csv(rest, path);
}

void write_triplets_csv(std::ostream& out, const SparseSymmetric& s) {
  out << "i,j,value\n";
  for (const auto& e : s.entries) {
    out << e.i << ',' << e.j << ',' << format_full(e.value) << '\n';
  }
}

void write_triplets_csv(const std::string& path, const SparseSymmetric& s) {
  auto f = open_out(path);
  write_triplets_csv(f, s);
}

SparseSymmetric read_triplets_csv(const std::string& path, int n) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw ValidationError(path + ": empty triplet file");
  SparseSymmetric s;
  s.n = n;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    double iv = 0.0, jv = 0.0, v = 0.0;
    if (fields.size() != 3 || !parse_double(fields[0], iv) ||
        !parse_double(fields[1], jv) || !parse_double(fields[2], v)) {
      std::ostringstream msg;
      msg << path << ": bad triplet at row " << lineno;
      throw ValidationError(msg.str());
    }
    const int i = static_cast<int>(iv), j = static_cast<int>(jv);
    if (i < 0 || j < i || j >= n) {
      std::ostringstream msg;
      msg << path << ": triplet index out of range at row " << lineno;
      throw ValidationError(msg.str());
    }
    s.entries.push_back({i, j, v});
  }
  return s;
}

void write_success_table_csv(std::ostream& out, const std::vector<SuccessCell>& cells) {
  out << "p,gamma,xi0_multiplier,trials,successes,rate\n";
  for (const auto& c : cells) {
    out << format_short(c.p) << ',' << format_short(c.gamma) << ','
        << format_short(c.xi0_multiplier) << ',' << c.trials << ','
        << c.successes << ',' << format_short(c.rate) << '\n';
  }
}

void write_success_table_csv(const std::string& path,
                             const std::vector<SuccessCell>& cells) {
  auto f = open_out(path);
  write_success_table_csv(f, cells);
}

void write_rmse_table_csv(std::ostream& out, const std::vector<RmseCell>& cells) {
  out << "sigma2,m,method,mean_rmse,std_rmse\n";
  for (const auto& c : cells) {
    out << format_short(c.sigma2) << ',' << c.m << ',' << c.method << ','
        << format_short(c.mean_rmse) << ',' << format_short(c.std_rmse) << '\n';
  }
}

void write_rmse_table_csv(const std::string& path, const std::vector<RmseCell>& cells) {
  auto f = open_out(path);
  write_rmse_table_csv(f, cells);
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  out << "k,xi_k,supp_size,err_S_inf,err_L_inf,err_X_2inf\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_short(r.xi) << ',' << r.support_size << ','
        << format_short(r.err_outlier_inf) << ',' << format_short(r.err_gram_inf)
        << ',' << format_short(r.err_points_two_inf) << '\n';
  }
}

void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  auto f = open_out(path);
  write_trace_csv(f, trace);
}

}  // namespace io
}  // namespace rmds
