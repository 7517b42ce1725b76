#pragma once

#include "arrangement.hpp"
#include "bsengine.hpp"
#include "error.hpp"
#include "field.hpp"
#include "gradedla.hpp"
#include "io.hpp"
#include "koszul.hpp"
#include "localspec.hpp"
#include "parallel.hpp"
#include "polyring.hpp"
#include "rational.hpp"
