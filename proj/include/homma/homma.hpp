// Umbrella header.
#pragma once

#include "homma/battery.hpp"
#include "homma/classify.hpp"
#include "homma/errors.hpp"
#include "homma/expr.hpp"
#include "homma/geometry.hpp"
#include "homma/homogeneity.hpp"
#include "homma/identities.hpp"
#include "homma/jet.hpp"
#include "homma/linalg.hpp"
#include "homma/models.hpp"
#include "homma/outer.hpp"
#include "homma/parse.hpp"
#include "homma/report.hpp"
#include "homma/sampling.hpp"
#include "homma/version.hpp"
