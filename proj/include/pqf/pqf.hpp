#pragma once

#include "base.hpp"
#include "cyclo.hpp"
#include "dualgroup.hpp"
#include "fourier.hpp"
#include "json_io.hpp"
#include "measures.hpp"
#include "qadic.hpp"
#include "wtt.hpp"

namespace pqf {

inline constexpr const char* version = "0.1.0";

}  // namespace pqf
