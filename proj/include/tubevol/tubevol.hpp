#pragma once

#include "tubevol/census.hpp"
#include "tubevol/csv.hpp"
#include "tubevol/errors.hpp"
#include "tubevol/figures.hpp"
#include "tubevol/hypkernel.hpp"
#include "tubevol/kleinian.hpp"
#include "tubevol/surgery.hpp"
#include "tubevol/svg.hpp"
#include "tubevol/topobounds.hpp"
