#include "bplab/output.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bplab/errors.hpp"

namespace bplab {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_write(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, path.string() + ": cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, path.string() + ": write failed");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> diagnostics_columns(const std::vector<std::array<int, 2>>& modes) {
  std::vector<std::string> cols{"t", "EN", "E_bp", "E_thm", "sup_U", "sup_gradU"};
  for (const auto& m : modes) cols.push_back("mode_" + std::to_string(m[0]) + "_" + std::to_string(m[1]));
  return cols;
}

void write_diagnostics_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& records,
                           const std::vector<std::array<int, 2>>& modes) {
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    std::vector<double> row{r.time, r.EN, r.E_bp, r.E_thm, r.sup_U, r.sup_gradU};
    row.insert(row.end(), r.modes.begin(), r.modes.end());
    rows.push_back(std::move(row));
  }
  write_table_csv(path, diagnostics_columns(modes), rows);
}

void write_table_csv(const fs::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_for_write(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error(ErrorCode::InvalidArgument, path.string() + ": row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  finish(out, path);
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

nlohmann::json to_json(const GridSpec& grid) {
  nlohmann::json n = nlohmann::json::array();
  nlohmann::json l = nlohmann::json::array();
  for (int a = 0; a < grid.dim; ++a) {
    n.push_back(grid.n[static_cast<std::size_t>(a)]);
    l.push_back(grid.length[static_cast<std::size_t>(a)]);
  }
  return {{"dim", grid.dim}, {"n", n}, {"length", l}, {"gamma", grid.gamma}};
}

nlohmann::json to_json(const CoercivityReport& r) {
  nlohmann::json j{{"operator", to_string(r.kind)},
                   {"grid", to_json(r.grid)},
                   {"mu", r.mu},
                   {"beta", r.beta},
                   {"norm", r.norm},
                   {"trials", r.trials},
                   {"min_quotient", r.min_quotient},
                   {"max_quotient", r.max_quotient},
                   {"symmetry_residual", r.symmetry_residual},
                   {"inverse_residual", r.inverse_residual},
                   {"positive", r.positive}};
  j["dense_min"] = r.dense_min ? nlohmann::json(*r.dense_min) : nlohmann::json(nullptr);
  j["dense_max"] = r.dense_max ? nlohmann::json(*r.dense_max) : nlohmann::json(nullptr);
  return j;
}

void write_snapshot(const fs::path& stem, const std::vector<const Field*>& components,
                    const std::vector<std::string>& names, double time) {
  if (components.empty() || components.size() != names.size()) {
    throw Error(ErrorCode::InvalidArgument, "snapshot needs one name per component");
  }
  const Grid& grid = components.front()->grid();
  fs::path bin = stem;
  bin += ".bin";
  fs::path side = stem;
  side += ".json";
  std::ofstream out = open_for_write(bin, std::ios::out | std::ios::binary);
  for (const Field* f : components) {
    require_same_grid(f->grid(), grid);
    for (double v : f->values()) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
  finish(out, bin);
  nlohmann::json shape = nlohmann::json::array();
  for (int a = 0; a < grid.dim(); ++a) shape.push_back(grid.n(a));
  write_json(side, {{"grid", to_json(grid.spec())},
                    {"time", time},
                    {"components", names},
                    {"shape", shape},
                    {"dtype", "float64"},
                    {"byte_order", "little"},
                    {"layout", "row-major, x slowest, components back to back"},
                    {"bytes", 8 * grid.size() * components.size()}});
}

Snapshot read_snapshot(const fs::path& stem) {
  fs::path bin = stem;
  bin += ".bin";
  fs::path side = stem;
  side += ".json";
  Snapshot snap;
  {
    std::ifstream in(side);
    if (!in) throw Error(ErrorCode::IoError, side.string() + ": cannot open");
    try {
      snap.sidecar = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::IoError, side.string() + ": " + e.what());
    }
  }
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, bin.string() + ": cannot open");
  char bytes[8];
  while (in.read(bytes, 8)) {
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    snap.values.push_back(std::bit_cast<double>(bits));
  }
  if (in.gcount() != 0) throw Error(ErrorCode::IoError, bin.string() + ": truncated");
  return snap;
}

}  // namespace bplab
