#include "orthoseries/cli.hpp"

int main(int argc, char** argv) { return orthoseries::cli::dispatch(argc, argv); }
