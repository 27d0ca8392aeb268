#pragma once

#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/complex.hpp"
#include "disclab/series.hpp"
#include "disclab/spaces.hpp"
#include "disclab/bounds.hpp"
#include "disclab/weight.hpp"
#include "disclab/construction.hpp"
#include "disclab/baire.hpp"
