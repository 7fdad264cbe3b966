#pragma once

#include "niep/conditions.hpp"
#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/permutative.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"
#include "niep/symmetric.hpp"
#include "niep/verify.hpp"
