#include <cmath>
#include <ostream>

#include "eulerstab/io.hpp"

namespace eulerstab {

void write_vtk(std::ostream& out, const Mesh& mesh, const BlockVector& U, const std::vector<double>& detector,
               double gamma) {
  const int n = mesh.num_nodes();
  const int nc = mesh.num_cells();
  out << "# vtk DataFile Version 3.0\n"
      << "eulerstab solution\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n"
      << "POINTS " << n << " double\n";
  for (int i = 0; i < n; ++i) {
    out << format_double(mesh.node(i)[0]) << ' ' << format_double(mesh.node(i)[1]) << " 0\n";
  }
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (const auto& c : mesh.cells()) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (int e = 0; e < nc; ++e) out << "9\n";

  out << "POINT_DATA " << n << '\n';
  out << "SCALARS density double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << format_double(U[i][0]) << '\n';
  out << "VECTORS velocity double\n";
  for (int i = 0; i < n; ++i) {
    out << format_double(U[i][1] / U[i][0]) << ' ' << format_double(U[i][2] / U[i][0]) << " 0\n";
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << format_double(pressure(U[i], gamma)) << '\n';
  out << "SCALARS mach double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) {
    const double p = pressure(U[i], gamma);
    const double speed = std::hypot(U[i][1], U[i][2]) / U[i][0];
    const double c = p > 0.0 && U[i][0] > 0.0 ? std::sqrt(gamma * p / U[i][0]) : std::nan("");
    out << format_double(speed / c) << '\n';
  }
  out << "SCALARS detector double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << format_double(i < static_cast<int>(detector.size()) ? detector[i] : 0.0) << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "step,iter,phase,rel_residual,rel_galerkin_residual,rel_increment,lambda,eps_k\n";
  for (const auto& r : history) {
    out << r.step << ',' << r.iter << ',' << phase_name(r.phase) << ',' << format_double(r.rel_residual) << ','
        << format_double(r.rel_galerkin_residual) << ',' << format_double(r.rel_increment) << ','
        << format_double(r.lambda) << ',' << format_double(r.eps_k) << '\n';
  }
}

void write_reference_csv(std::ostream& out, const std::vector<double>& x, double t) {
  const RiemannSolution sod = solve_riemann({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  out << "x,rho,u,p\n";
  for (const double xi : x) {
    const Primitive1D w = t > 0.0 ? sod.sample((xi - 0.5) / t) : (xi < 0.5 ? sod.left : sod.right);
    out << format_double(xi) << ',' << format_double(w.rho) << ',' << format_double(w.u) << ','
        << format_double(w.p) << '\n';
  }
}

}  // namespace eulerstab
