import os
import sys

if getattr(sys, 'frozen', False) and hasattr(sys, '_MEIPASS'):
    os.chdir(sys._MEIPASS)

from semigfpy.experiment.cli import main

if __name__ == '__main__':
    sys.exit(main())
