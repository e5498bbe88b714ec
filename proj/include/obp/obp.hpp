#pragma once

#include "obp/admissibility.hpp"
#include "obp/core.hpp"
#include "obp/error.hpp"
#include "obp/geometry.hpp"
#include "obp/report.hpp"
#include "obp/search.hpp"
#include "obp/spectral.hpp"
#include "obp/svg.hpp"
