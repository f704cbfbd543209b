#pragma once

#include "infogeo/errors.hpp"
#include "infogeo/calculus.hpp"
#include "infogeo/simplex.hpp"
#include "infogeo/transports.hpp"
#include "infogeo/flows.hpp"
#include "infogeo/second_order.hpp"
#include "infogeo/atlas.hpp"
#include "infogeo/zoo.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/parametric.hpp"
#include "infogeo/deformed.hpp"
#include "infogeo/random.hpp"
