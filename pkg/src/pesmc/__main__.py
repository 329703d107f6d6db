import sys

from pesmc.cli import main

sys.exit(main())
