#pragma once

#include "enriched/category.hpp"
#include "enriched/corpus.hpp"
#include "enriched/metric_semantics.hpp"
#include "enriched/quantale.hpp"
#include "enriched/report.hpp"
#include "enriched/rng.hpp"
#include "enriched/semantics.hpp"
#include "enriched/text.hpp"
#include "enriched/verify.hpp"
