#ifndef ELGRAT_IO_HPP
#define ELGRAT_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elgrat/adapt.hpp"
#include "elgrat/assembly.hpp"
#include "elgrat/mesh.hpp"

namespace elgrat {

// Shortest decimal string that round-trips the value.
std::string format_double(double v);

// Legacy ASCII VTK unstructured grid: triangles plus tagged boundary line
// cells. Optional per-vertex displacement (real part, imaginary part,
// magnitude) and per-triangle indicator.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<Vec2c>* field = nullptr,
               const std::vector<double>* eta = nullptr);

// Matrix Market, coordinate complex general, one-based indices.
void write_matrix_market(const std::string& path, const SparseCplx& matrix);
// Matrix Market, array complex general (a dense column).
void write_matrix_market(const std::string& path, const Eigen::VectorXcd& vec);

// One row per iteration: iter,dof,N,eps_N,eps_h,e_h,seconds. A NaN e_h
// (no exact solution available) leaves the column empty.
void write_convergence_csv(const std::string& path, const std::vector<IterationRecord>& records);

struct StudyRow {
  int level = 0;
  double h = 0.0;
  int dof = 0;
  double e_h = 0.0;   // NaN when no exact solution
  double rate = 0.0;  // log2(e_prev / e_this); NaN on the first row
};

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows);

std::uint64_t fnv1a64(const void* data, std::size_t size);

// MANIFEST in the given directory: a status line, then "name size hash" per
// artifact. A nonempty note marks the run incomplete.
void write_manifest(const std::string& directory, const std::vector<std::string>& names,
                    const std::string& incomplete_note = "");

}  // namespace elgrat

#endif
