// Copyright 2026 The cvqnd Authors
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

// Internal extended-precision scalar for accumulations whose cancellations
// exceed double headroom. Not installed.

#pragma once

namespace cvqnd::internal {

#if defined(__SIZEOF_FLOAT128__)
using wide_float = __float128;
#else
using wide_float = long double;
#endif

}  // namespace cvqnd::internal
