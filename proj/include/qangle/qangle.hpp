#pragma once

#include "qangle/core_state.hpp"
#include "qangle/errors.hpp"
#include "qangle/families.hpp"
#include "qangle/operators.hpp"
#include "qangle/search.hpp"
#include "qangle/uncertainty.hpp"
