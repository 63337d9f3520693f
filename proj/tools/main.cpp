#include "nonsig/cli.hpp"

int main(int argc, char** argv) { return nonsig::dispatch(argc, argv); }
