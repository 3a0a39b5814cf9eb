#pragma once

#include "dartree/error.hpp"
#include "dartree/rational.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/radical.hpp"
#include "dartree/linalg.hpp"
#include "dartree/trees.hpp"
#include "dartree/product.hpp"
#include "dartree/weights.hpp"
#include "dartree/multishift.hpp"
#include "dartree/cokernel.hpp"
#include "dartree/model.hpp"
#include "dartree/classify.hpp"
