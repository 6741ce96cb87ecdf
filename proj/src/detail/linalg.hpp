#pragma once

#include "schurlab/types.hpp"

#include <Eigen/Dense>

namespace schurlab::detail {

double max_abs(const ComplexMatrix& m);
double max_abs(const RealMatrix& m);
double max_abs_imag(const ComplexMatrix& m);

// max_{i,j} |m(j,i) - conj(m(i,j))|
double hermitian_deviation(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);
bool all_finite(const RealMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

// Orthonormal basis of the mean-zero subspace, m x (m-1), columns sum to 0.
RealMatrix helmert_basis(Eigen::Index m);

struct EigExtreme {
  double value = 0.0;
  ComplexVector vector;
};

EigExtreme min_eig_hermitian(const ComplexMatrix& m);
EigExtreme max_eig_hermitian(const ComplexMatrix& m);

RealVector singular_values(const ComplexMatrix& m);
double schatten_from_singvals(const RealVector& sv, SchattenIndex p);

// Nearest (Frobenius) PSD matrix: symmetrize and clip negative eigenvalues.
RealMatrix psd_project(const RealMatrix& s);

// Rows of the square root of a PSD matrix, keeping eigenvalues > clip_tol.
RealMatrix psd_sqrt_rows(const RealMatrix& s, double clip_tol);
ComplexMatrix psd_sqrt_columns(const ComplexMatrix& z);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace schurlab::detail
