#ifndef CODEBOUND_CODEBOUND_HPP
#define CODEBOUND_CODEBOUND_HPP

#include "codebound/codes.hpp"
#include "codebound/dgs_bound.hpp"
#include "codebound/errors.hpp"
#include "codebound/gegenbauer.hpp"
#include "codebound/interval_max.hpp"
#include "codebound/linprog.hpp"
#include "codebound/pfender_bound.hpp"
#include "codebound/serialization.hpp"

#endif
