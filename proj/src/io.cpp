#include "toposim/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace toposim {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr std::array<char, 5> kMagic = {'T', 'S', 'T', 'S', '1'};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line, std::size_t column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t')) ++end;
  if (field.empty() || end == begin || *end != '\0')
    fail(line, "column " + std::to_string(column + 1) + ": '" + field + "' is not a number");
  if (!std::isfinite(v))
    fail(line, "column " + std::to_string(column + 1) + ": non-finite value");
  return v;
}

/// Reads the next non-blank line; returns false at end of input.
bool next_line(std::istream& is, std::string& line, std::size_t& number) {
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& is, int bytes, const char* what) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), bytes))
    throw ParseError(std::string("binary series truncated while reading ") + what);
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void write_series_csv(std::ostream& os, const MultivariateSeries& s) {
  os << 't';
  for (Eigen::Index p = 0; p < s.channels(); ++p) os << ",ch" << p;
  os << '\n';
  for (Eigen::Index t = 0; t < s.samples(); ++t) {
    os << t;
    for (Eigen::Index p = 0; p < s.channels(); ++p) os << ',' << format_double(s.data(p, t));
    os << '\n';
  }
}

MultivariateSeries read_series_csv(std::istream& is, double sampling_rate_hz) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(is, line, number)) throw ParseError("line 1: empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "t") fail(number, "expected header 't,ch0,...'");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "ch" + std::to_string(i - 1))
      fail(number, "header column " + std::to_string(i + 1) + " should be ch" +
                       std::to_string(i - 1) + ", found '" + header[i] + "'");
  const std::size_t channels = header.size() - 1;

  std::vector<double> values;
  Eigen::Index samples = 0;
  while (next_line(is, line, number)) {
    const auto fields = split_csv(line);
    if (fields.size() != channels + 1)
      fail(number, "expected " + std::to_string(channels + 1) + " fields, found " +
                       std::to_string(fields.size()));
    parse_number(fields[0], number, 0);
    for (std::size_t c = 1; c < fields.size(); ++c)
      values.push_back(parse_number(fields[c], number, c));
    ++samples;
  }
  if (samples == 0) fail(number + 1, "no data rows after the header");

  MultivariateSeries s;
  s.sampling_rate_hz = sampling_rate_hz;
  s.data = Eigen::Map<const Eigen::MatrixXd>(values.data(), static_cast<Eigen::Index>(channels),
                                             samples);
  return s;
}

void write_series_bin(std::ostream& os, const MultivariateSeries& s) {
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, static_cast<std::uint32_t>(s.channels()));
  put_u32(os, static_cast<std::uint32_t>(s.samples()));
  for (Eigen::Index t = 0; t < s.samples(); ++t)
    for (Eigen::Index p = 0; p < s.channels(); ++p) put_f64(os, s.data(p, t));
}

MultivariateSeries read_series_bin(std::istream& is, double sampling_rate_hz) {
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw ParseError("binary series: bad magic (expected TSTS1)");
  const auto p = static_cast<Eigen::Index>(get_le(is, 4, "the channel count"));
  const auto t = static_cast<Eigen::Index>(get_le(is, 4, "the sample count"));
  if (p < 1 || t < 1) throw ParseError("binary series: empty dimensions");
  MultivariateSeries s;
  s.sampling_rate_hz = sampling_rate_hz;
  s.data.resize(p, t);
  for (Eigen::Index j = 0; j < t; ++j)
    for (Eigen::Index i = 0; i < p; ++i) {
      const double v = std::bit_cast<double>(get_le(is, 8, "the data block"));
      if (!std::isfinite(v)) throw ParseError("binary series: non-finite value");
      s.data(i, j) = v;
    }
  if (is.peek() != std::char_traits<char>::eof())
    throw ParseError("binary series: trailing bytes after the data block");
  return s;
}

MultivariateSeries read_series_file(const std::string& path, double sampling_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::array<char, 5> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 5 && head == kMagic;
  in.clear();
  in.seekg(0);
  try {
    return binary ? read_series_bin(in, sampling_rate_hz) : read_series_csv(in, sampling_rate_hz);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  os << "node";
  for (Eigen::Index j = 0; j < m.cols(); ++j) os << ',' << j;
  os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << ',' << format_double(m(i, j));
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(is, line, number)) throw ParseError("line 1: empty file");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "node") fail(number, "expected header 'node,0,1,...'");
  const auto n = static_cast<Eigen::Index>(header.size() - 1);
  Eigen::MatrixXd m(n, n);
  Eigen::Index row = 0;
  while (next_line(is, line, number)) {
    const auto fields = split_csv(line);
    if (static_cast<Eigen::Index>(fields.size()) != n + 1)
      fail(number, "expected " + std::to_string(n + 1) + " fields");
    if (row >= n) fail(number, "more rows than columns");
    for (Eigen::Index j = 0; j < n; ++j)
      m(row, j) = parse_number(fields[j + 1], number, static_cast<std::size_t>(j + 1));
    ++row;
  }
  if (row != n) fail(number + 1, "expected " + std::to_string(n) + " rows");
  return m;
}

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& pd) {
  os << "dim,birth,death,essential\n";
  for (const auto& f : pd.features)
    os << f.dim << ',' << format_double(f.birth) << ',' << format_double(f.death) << ','
       << (f.essential ? 1 : 0) << '\n';
}

PersistenceDiagram read_diagram_csv(std::istream& is, double death_cap) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(is, line, number)) throw ParseError("line 1: empty file");
  if (split_csv(line) != std::vector<std::string>{"dim", "birth", "death", "essential"})
    fail(number, "expected header 'dim,birth,death,essential'");
  PersistenceDiagram pd;
  pd.death_cap = death_cap;
  while (next_line(is, line, number)) {
    const auto fields = split_csv(line);
    if (fields.size() != 4) fail(number, "expected 4 fields");
    PersistencePair f;
    f.dim = static_cast<int>(parse_number(fields[0], number, 0));
    f.birth = parse_number(fields[1], number, 1);
    f.death = parse_number(fields[2], number, 2);
    f.essential = parse_number(fields[3], number, 3) != 0.0;
    pd.max_dim = std::max(pd.max_dim, f.dim);
    pd.features.push_back(f);
  }
  return pd;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "snr_index,snr,replicate,seed,p0,p1,p2\n";
  for (const auto& row : r.rows)
    os << row.snr_index << ',' << format_double(row.snr) << ',' << row.replicate << ','
       << row.seed << ',' << format_double(row.total.p0) << ',' << format_double(row.total.p1)
       << ',' << format_double(row.total.p2) << '\n';
}

void write_bootstrap_csv(std::ostream& os, const BootstrapResult& r) {
  os << "group,draw,p0,p1,p2\n";
  const std::vector<TotalPersistence>* groups[] = {&r.boot1, &r.boot2};
  for (int g = 0; g < 2; ++g)
    for (std::size_t b = 0; b < groups[g]->size(); ++b) {
      const auto& t = (*groups[g])[b];
      os << g + 1 << ',' << b << ',' << format_double(t.p0) << ',' << format_double(t.p1)
         << ',' << format_double(t.p2) << '\n';
    }
}

void write_summaries_csv(std::ostream& os, const BootstrapResult& r) {
  os << "group,replicate,p0,p1,p2\n";
  const std::vector<TotalPersistence>* groups[] = {&r.group1, &r.group2};
  for (int g = 0; g < 2; ++g)
    for (std::size_t i = 0; i < groups[g]->size(); ++i) {
      const auto& t = (*groups[g])[i];
      os << g + 1 << ',' << i << ',' << format_double(t.p0) << ',' << format_double(t.p1)
         << ',' << format_double(t.p2) << '\n';
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      fs::remove(tmp);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace toposim
