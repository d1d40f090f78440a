#ifndef FPK_IO_HPP
#define FPK_IO_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fpk/evolution.hpp"
#include "fpk/grid.hpp"
#include "fpk/inequalities.hpp"
#include "fpk/operator.hpp"
#include "fpk/spectral.hpp"

namespace fpk {

/// 17-significant-digit rendering: round-trip exact for golden files.
std::string fmt17(double x);

/// Minimal JSON value with insertion-ordered objects and fmt17 numbers, so
/// identical inputs serialize byte-identically.
class Json {
public:
  using Array = std::vector<Json>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(double d) : v_(d) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::uint64_t u) : v_(static_cast<std::int64_t>(u)) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}

  /// Object field access; creates the key on first use (insertion order kept).
  Json& operator[](const std::string& key);

  void push_back(Json j);
  std::string dump(int indent = 2) const;

private:
  struct Object {
    std::vector<std::pair<std::string, Json>> items;
  };
  std::variant<std::nullptr_t, bool, double, std::int64_t, std::string, Array,
               std::shared_ptr<Object>>
      v_;
  void write(std::string& out, int indent, int depth) const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// --- CSV / MatrixMarket surfaces ---
void write_gridfunction_csv(const std::string& path, const GridFunction& f);
GridFunction read_gridfunction_csv(const std::string& path, GridPtr grid);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_spectrum_csv(const std::string& path, const SpectrumResult& spec);
void write_nash_csv(const std::string& path, const NashReport& report);
void write_matrix_market(const std::string& path, const OperatorMatrix& op);

}  // namespace fpk

#endif
