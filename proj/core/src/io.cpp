#include "fpk/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpk {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json& Json::operator[](const std::string& key) {
  if (!std::holds_alternative<std::shared_ptr<Object>>(v_))
    v_ = std::make_shared<Object>();
  auto& obj = *std::get<std::shared_ptr<Object>>(v_);
  for (auto& [k, val] : obj.items)
    if (k == key) return val;
  obj.items.emplace_back(key, Json());
  return obj.items.back().second;
}

void Json::push_back(Json j) {
  if (!std::holds_alternative<Array>(v_)) v_ = Array{};
  std::get<Array>(v_).push_back(std::move(j));
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const auto pad = [&](int d) { return std::string(static_cast<std::size_t>(indent * d), ' '); };
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (std::holds_alternative<bool>(v_)) {
    out += std::get<bool>(v_) ? "true" : "false";
  } else if (std::holds_alternative<double>(v_)) {
    out += fmt17(std::get<double>(v_));
  } else if (std::holds_alternative<std::int64_t>(v_)) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%" PRId64, std::get<std::int64_t>(v_));
    out += buf;
  } else if (std::holds_alternative<std::string>(v_)) {
    write_escaped(out, std::get<std::string>(v_));
  } else if (std::holds_alternative<Array>(v_)) {
    const auto& arr = std::get<Array>(v_);
    if (arr.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out += pad(depth + 1);
      arr[i].write(out, indent, depth + 1);
      if (i + 1 < arr.size()) out += ',';
      out += '\n';
    }
    out += pad(depth) + "]";
  } else {
    const auto& obj = *std::get<std::shared_ptr<Object>>(v_);
    if (obj.items.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (std::size_t i = 0; i < obj.items.size(); ++i) {
      out += pad(depth + 1);
      write_escaped(out, obj.items[i].first);
      out += ": ";
      obj.items[i].second.write(out, indent, depth + 1);
      if (i + 1 < obj.items.size()) out += ',';
      out += '\n';
    }
    out += pad(depth) + "}";
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingInputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_gridfunction_csv(const std::string& path, const GridFunction& f) {
  const Grid& g = f.grid();
  std::string out = g.dim() == 1 ? "index,x,value\n" : "index,x,y,value\n";
  for (int i = 0; i < f.size(); ++i) {
    const Vec x = g.center(i);
    out += std::to_string(i);
    out += ',';
    out += fmt17(x[0]);
    if (g.dim() == 2) {
      out += ',';
      out += fmt17(x[1]);
    }
    out += ',';
    out += fmt17(f[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

GridFunction read_gridfunction_csv(const std::string& path, GridPtr grid) {
  std::istringstream is(read_text_file(path));
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty grid-function CSV: " + path);
  GridFunction f(grid);
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    const std::size_t expect = grid->dim() == 1 ? 3 : 4;
    if (cols.size() != expect)
      throw ConfigError("malformed grid-function CSV row: '" + line + "'");
    const int idx = std::stoi(cols[0]);
    if (idx < 0 || idx >= f.size()) throw ConfigError("grid-function CSV index out of range");
    f[idx] = std::stod(cols.back());
    ++rows;
  }
  if (rows != f.size()) throw ConfigError("grid-function CSV row count mismatch");
  return f;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::string out = "t,mass,min,dist_l2k,norm_lpk\n";
  for (const auto& r : traj.rows) {
    out += fmt17(r.t);
    out += ',';
    out += fmt17(r.mass);
    out += ',';
    out += fmt17(r.min_value);
    out += ',';
    out += fmt17(r.dist_l2k);
    out += ',';
    out += fmt17(r.norm_lpk);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_spectrum_csv(const std::string& path, const SpectrumResult& spec) {
  std::string out = "re,im\n";
  for (const auto& z : spec.eigenvalues) {
    out += fmt17(z.real());
    out += ',';
    out += fmt17(z.imag());
    out += '\n';
  }
  write_text_file(path, out);
}

void write_nash_csv(const std::string& path, const NashReport& report) {
  std::string out = report.d == 1 ? "center,width,ratio\n" : "center_x,center_y,width,ratio\n";
  for (const auto& e : report.entries) {
    out += fmt17(e.center[0]);
    if (report.d == 2) {
      out += ',';
      out += fmt17(e.center[1]);
    }
    out += ',';
    out += fmt17(e.width);
    out += ',';
    out += fmt17(e.ratio);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_matrix_market(const std::string& path, const OperatorMatrix& op) {
  const auto& m = op.matrix();
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += "% scheme: " + op.scheme() + ", field: " + op.field_desc() + "\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
         std::to_string(m.nonZeros()) + "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      out += std::to_string(it.row() + 1);
      out += ' ';
      out += std::to_string(it.col() + 1);
      out += ' ';
      out += fmt17(it.value());
      out += '\n';
    }
  write_text_file(path, out);
}

}  // namespace fpk
