# Models module