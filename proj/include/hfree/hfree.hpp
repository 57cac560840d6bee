#pragma once

#include "hfree/bfs_tester.hpp"
#include "hfree/choice_tree.hpp"
#include "hfree/congest.hpp"
#include "hfree/constructions.hpp"
#include "hfree/copies.hpp"
#include "hfree/dfs_tester.hpp"
#include "hfree/diagnostics.hpp"
#include "hfree/errors.hpp"
#include "hfree/generators.hpp"
#include "hfree/graph.hpp"
#include "hfree/pattern.hpp"
#include "hfree/rng.hpp"
#include "hfree/tester.hpp"
#include "hfree/transcript_io.hpp"
