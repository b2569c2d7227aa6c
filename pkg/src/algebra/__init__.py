# emforge algebra package
