#pragma once

#include "sproc/stream.hpp"
#include "sproc/tree.hpp"
#include "sproc/processor.hpp"
#include "sproc/represent.hpp"
#include "sproc/compose.hpp"
#include "sproc/combinators.hpp"
#include "sproc/harness.hpp"
#include "sproc/pipeline.hpp"
