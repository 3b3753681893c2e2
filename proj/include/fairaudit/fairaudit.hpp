// Umbrella header.

#pragma once

#include "fairaudit/adversary.hpp"
#include "fairaudit/certificates.hpp"
#include "fairaudit/core.hpp"
#include "fairaudit/io.hpp"
#include "fairaudit/merton.hpp"
#include "fairaudit/normal.hpp"
#include "fairaudit/presets.hpp"
#include "fairaudit/solver.hpp"
#include "fairaudit/uncertainty.hpp"
