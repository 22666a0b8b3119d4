#include "matterwave/cli/app.hpp"

int main(int argc, char** argv) { return matterwave::cli::run(argc, argv); }
