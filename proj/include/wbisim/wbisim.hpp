#pragma once

#include "wbisim/axioms.hpp"
#include "wbisim/bisim.hpp"
#include "wbisim/document.hpp"
#include "wbisim/ext_rational.hpp"
#include "wbisim/oracle.hpp"
#include "wbisim/quotient.hpp"
#include "wbisim/semiring.hpp"
#include "wbisim/solver.hpp"
#include "wbisim/wlts.hpp"
