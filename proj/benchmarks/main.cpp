#include <benchmark/benchmark.h>

// The packaged benchmark_main archive holds LTO bytecode tied to one compiler build.
BENCHMARK_MAIN();
