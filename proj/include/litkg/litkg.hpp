// Copyright 2026 The litkg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LITKG_LITKG_HPP
#define LITKG_LITKG_HPP

#include "litkg/alias_table.hpp"
#include "litkg/analytics.hpp"
#include "litkg/common.hpp"
#include "litkg/corpus_fetch.hpp"
#include "litkg/csv.hpp"
#include "litkg/error.hpp"
#include "litkg/export.hpp"
#include "litkg/graph.hpp"
#include "litkg/node2vec.hpp"
#include "litkg/parallel.hpp"
#include "litkg/pubtator.hpp"
#include "litkg/random.hpp"
#include "litkg/sgns.hpp"
#include "litkg/tsne.hpp"

#endif  // LITKG_LITKG_HPP
