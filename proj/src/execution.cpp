#include "cflex/execution.hpp"

#ifdef CFLEX_HAVE_OPENMP
#include <omp.h>
#endif

namespace cflex {

int max_threads() {
#ifdef CFLEX_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace cflex
