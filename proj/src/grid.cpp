#include "rodsed/grid.hpp"

#include "rodsed/error.hpp"

namespace rodsed {

void Grid1D::validate() const {
  if (!(x_right > x_left)) throw Error(ErrorKind::config, "grid needs x_right > x_left");
  if (cells < 4) throw Error(ErrorKind::config, "grid needs at least 4 cells");
}

void Grid2D::validate() const {
  if (!(x_right > x_left) || !(z_right > z_left)) throw Error(ErrorKind::config, "grid needs a positive extent");
  if (nx < 4 || nz < 4) throw Error(ErrorKind::config, "grid needs at least 4 cells per direction");
}

}  // namespace rodsed
