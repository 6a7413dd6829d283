#pragma once

namespace rodsed {

struct Grid1D {
  double x_left = 0.0;
  double x_right = 1.0;
  int cells = 4;

  double dx() const { return (x_right - x_left) / cells; }
  double center(int i) const { return x_left + (i + 0.5) * dx(); }
  double length() const { return x_right - x_left; }
  void validate() const;
};

struct Grid2D {
  double x_left = 0.0;
  double x_right = 1.0;
  int nx = 4;
  double z_left = 0.0;
  double z_right = 1.0;
  int nz = 4;

  double dx() const { return (x_right - x_left) / nx; }
  double dz() const { return (z_right - z_left) / nz; }
  double x_center(int i) const { return x_left + (i + 0.5) * dx(); }
  double z_center(int j) const { return z_left + (j + 0.5) * dz(); }
  int cells() const { return nx * nz; }
  // Row-major with x fastest.
  int index(int i, int j) const { return j * nx + i; }
  void validate() const;
};

}  // namespace rodsed
