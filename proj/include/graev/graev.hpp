#pragma once

#include "amalgam.hpp"
#include "evaluation_tree.hpp"
#include "factor.hpp"
#include "finite_group.hpp"
#include "free_group.hpp"
#include "graev_product.hpp"
#include "hnn.hpp"
#include "io.hpp"
#include "rational.hpp"
#include "sin_toolkit.hpp"
#include "words.hpp"
