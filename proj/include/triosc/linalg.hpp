// linalg.hpp — small symmetric 3x3 helpers.
#pragma once

#include <Eigen/Dense>

namespace triosc {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

struct SymmetricEigen {
    Vec3 values;   // decreasing
    Mat3 vectors;  // column k belongs to values(k)
    int sweeps{0};
};

// Cyclic Jacobi rotations until the off-diagonal mass drops below tol times the Frobenius norm.
SymmetricEigen jacobi_eigen(const Mat3& a, double tol = 1e-15, int max_sweeps = 64);

double max_offdiagonal(const Mat3& a);

Mat3 rotation_x1(double angle);
Mat3 rotation_x2(double angle);
Mat3 rotation_x3(double angle);

}  // namespace triosc
