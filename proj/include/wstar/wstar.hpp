#pragma once

#include "wstar/derived_sets.hpp"
#include "wstar/dualvec.hpp"
#include "wstar/forest.hpp"
#include "wstar/generators.hpp"
#include "wstar/labeling.hpp"
#include "wstar/numbers.hpp"
#include "wstar/ordinal.hpp"
#include "wstar/shape.hpp"
#include "wstar/truncation.hpp"
#include "wstar/verify.hpp"
