#pragma once

#include "rotkit/errors.hpp"
#include "rotkit/scalar.hpp"
#include "rotkit/params.hpp"
#include "rotkit/pam.hpp"
#include "rotkit/series.hpp"
#include "rotkit/boundary.hpp"
#include "rotkit/conjugacy.hpp"
