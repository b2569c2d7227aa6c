# emforge Hopf algebra package
