#pragma once

#include "qfo/field.hpp"

#include <span>

namespace qfo::detail {

/// Unnormalised in-place DFT; sign -1 is exp(-2 pi i jk/n). Row-major
/// (ny rows of nx). Safe to call from several threads at once.
void fft2_inplace(std::span<cplx> data, int nx, int ny, int sign);
void fft1_inplace(std::span<cplx> data, int sign);

} // namespace qfo::detail
