// placeholder, module under construction
