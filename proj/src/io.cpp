#include "elgrat/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <system_error>

#include "elgrat/errors.hpp"

namespace elgrat {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical reruns
  if (!out) throw config_error("cannot open output file '" + path + "'");
  return out;
}

std::string format_complex_pair(const cplx& z) {
  return format_double(z.real()) + " " + format_double(z.imag());
}

}  // namespace

std::string format_double(double v) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (ec != std::errc()) throw config_error("number formatting failed");
  return std::string(buffer, end);
}

void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<Vec2c>* field,
               const std::vector<double>* eta) {
  std::ofstream out = open_out(path);
  size_t num_tris = mesh.triangles.size();

  std::vector<std::pair<EdgeKey, BoundaryTag>> lines(mesh.boundary_edges.begin(),
                                                     mesh.boundary_edges.end());
  std::sort(lines.begin(), lines.end());
  size_t num_cells = num_tris + lines.size();

  out << "# vtk DataFile Version 3.0\n"
      << "scattering cell\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n"
      << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Vec2& p : mesh.vertices)
    out << format_double(p.x()) << " " << format_double(p.y()) << " 0\n";

  out << "CELLS " << num_cells << " " << (4 * num_tris + 3 * lines.size()) << "\n";
  for (const Triangle& tri : mesh.triangles)
    out << "3 " << tri.v[0] << " " << tri.v[1] << " " << tri.v[2] << "\n";
  for (const auto& [key, tag] : lines) {
    auto [v0, v1] = edge_key_vertices(key);
    out << "2 " << v0 << " " << v1 << "\n";
  }

  out << "CELL_TYPES " << num_cells << "\n";
  for (size_t k = 0; k < num_tris; ++k) out << "5\n";
  for (size_t k = 0; k < lines.size(); ++k) out << "3\n";

  out << "CELL_DATA " << num_cells << "\n"
      << "SCALARS boundary_tag int 1\n"
      << "LOOKUP_TABLE default\n";
  for (size_t k = 0; k < num_tris; ++k) out << "0\n";
  for (const auto& [key, tag] : lines) out << static_cast<int>(tag) << "\n";

  if (eta) {
    if (eta->size() != num_tris) throw config_error("vtk: eta size does not match triangle count");
    out << "SCALARS eta double 1\n"
        << "LOOKUP_TABLE default\n";
    for (double value : *eta) out << format_double(value) << "\n";
    for (size_t k = 0; k < lines.size(); ++k) out << "0\n";
  }

  if (field) {
    if (field->size() != mesh.vertices.size())
      throw config_error("vtk: field size does not match vertex count");
    out << "POINT_DATA " << mesh.vertices.size() << "\n"
        << "VECTORS u_re double\n";
    for (const Vec2c& u : *field)
      out << format_double(u.x().real()) << " " << format_double(u.y().real()) << " 0\n";
    out << "VECTORS u_im double\n";
    for (const Vec2c& u : *field)
      out << format_double(u.x().imag()) << " " << format_double(u.y().imag()) << " 0\n";
    out << "SCALARS u_mag double 1\n"
        << "LOOKUP_TABLE default\n";
    for (const Vec2c& u : *field) out << format_double(u.norm()) << "\n";
  }
}

void write_matrix_market(const std::string& path, const SparseCplx& matrix) {
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix coordinate complex general\n"
      << matrix.rows() << " " << matrix.cols() << " " << matrix.nonZeros() << "\n";
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseCplx::InnerIterator it(matrix, k); it; ++it)
      out << (it.row() + 1) << " " << (it.col() + 1) << " " << format_complex_pair(it.value())
          << "\n";
}

void write_matrix_market(const std::string& path, const Eigen::VectorXcd& vec) {
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix array complex general\n" << vec.size() << " 1\n";
  for (Eigen::Index k = 0; k < vec.size(); ++k) out << format_complex_pair(vec[k]) << "\n";
}

void write_convergence_csv(const std::string& path, const std::vector<IterationRecord>& records) {
  std::ofstream out = open_out(path);
  out << "iter,dof,N,eps_N,eps_h,e_h,seconds\n";
  for (const IterationRecord& r : records) {
    out << r.iteration << "," << r.dof << "," << r.N << "," << format_double(r.eps_N) << ","
        << format_double(r.eps_h) << ",";
    if (!std::isnan(r.e_h)) out << format_double(r.e_h);
    out << "," << format_double(r.seconds) << "\n";
  }
}

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows) {
  std::ofstream out = open_out(path);
  out << "level,h,dof,e_h,rate\n";
  for (const StudyRow& r : rows) {
    out << r.level << "," << format_double(r.h) << "," << r.dof << ",";
    if (!std::isnan(r.e_h)) out << format_double(r.e_h);
    out << ",";
    if (!std::isnan(r.rate)) out << format_double(r.rate);
    out << "\n";
  }
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const unsigned char* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ULL;
  for (std::size_t k = 0; k < size; ++k) {
    hash ^= bytes[k];
    hash *= 1099511628211ULL;
  }
  return hash;
}

void write_manifest(const std::string& directory, const std::vector<std::string>& names,
                    const std::string& incomplete_note) {
  std::ofstream out = open_out(directory + "/MANIFEST");
  if (incomplete_note.empty())
    out << "status complete\n";
  else
    out << "status incomplete: " << incomplete_note << "\n";
  for (const std::string& name : names) {
    std::ifstream in(directory + "/" + name, std::ios::binary);
    if (!in) throw config_error("manifest: cannot read artifact '" + name + "'");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content.data(), content.size())));
    out << name << " " << content.size() << " fnv1a64:" << hex << "\n";
  }
}

}  // namespace elgrat
