#pragma once

#include "semq/error.hpp"
#include "semq/keyword_search.hpp"
#include "semq/ontology.hpp"
#include "semq/rdf.hpp"
#include "semq/serialization.hpp"
#include "semq/sparql.hpp"
#include "semq/store.hpp"
