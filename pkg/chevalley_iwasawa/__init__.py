# chevalley-iwasawa
