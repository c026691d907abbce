#ifndef CATDIL_CATDIL_HPP
#define CATDIL_CATDIL_HPP

#include "catdil/error.hpp"
#include "catdil/operator.hpp"
#include "catdil/states.hpp"
#include "catdil/measures.hpp"
#include "catdil/broadcast.hpp"
#include "catdil/catalysis.hpp"
#include "catdil/choi.hpp"
#include "catdil/interchange.hpp"
#include "catdil/report.hpp"
#include "catdil/scenarios.hpp"

#endif
